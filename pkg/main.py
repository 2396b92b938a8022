"""
PU(2,1) Quadrangle Toolkit
==========================
Builds and checks pentagon relations R5 R4 R3 R2 R1 = delta for the
hyperelliptic group, certifies the quadrangle conditions, scans bending
deformations, and computes the Toledo invariant and Euler number.

Usage:
    python main.py verify-example
    python main.py build --s1 -0.615 --s2 1.36 --t45 1.36 --delta omega2
    python main.py check --input data/paper_example.json
    python main.py invariants --input data/paper_example.json
    python main.py bend-scan --input data/paper_example.json --pair 1
    python main.py closed-path --input data/paper_example.json

Complex values are written as Python literals; pass negative ones with an
equals sign, e.g. --tau=-2.22-3.845152792802909j.
"""

import argparse
import logging
import sys
from typing import List, Optional

from config import (
    EQ_TOL,
    ISO_TOL,
    RESIDUAL_TOL,
    SCAN_DTHETA,
    SCAN_STEPS,
    ConfigurationError,
    setup_logging,
    validate_config,
)
from hermitian import Tolerance
from pipeline import (
    EXIT_INPUT,
    build,
    check,
    closed_path,
    invariants,
    run_bend_scan,
    verify_example,
)

logger = logging.getLogger(__name__)

COMMANDS = ("verify-example", "build", "check", "invariants", "bend-scan", "closed-path")


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Quadrangles of bisectors and the hyperelliptic group in PU(2,1).",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="pentagon JSON file (check, invariants, bend-scan, closed-path)")
    parser.add_argument("--output", help="output file (defaults to output/<command>.json or .csv)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="bend-scan output format")
    parser.add_argument("--witness", help="inline point of C1, e.g. '0.62+0.36j, 0, 0.69'")
    parser.add_argument("--verbose", action="store_true", help="log per-row numerics")

    tolerances = parser.add_argument_group("tolerances")
    tolerances.add_argument("--eq-tol", type=float, default=EQ_TOL)
    tolerances.add_argument("--residual-tol", type=float, default=RESIDUAL_TOL)
    tolerances.add_argument("--iso-tol", type=float, default=ISO_TOL)

    params = parser.add_argument_group("build parameters")
    params.add_argument("--tau", type=_complex_arg, help="trace of R3 R2 R1")
    params.add_argument("--s1", type=float)
    params.add_argument("--s2", type=float)
    params.add_argument("--s", type=float, help="pick the surface root nearest to this value")
    params.add_argument("--root", type=int, help="index of the surface root in ascending order")
    params.add_argument("--t45", type=float, help="tance of (p4, p5)")
    params.add_argument("--delta", choices=("1", "omega", "omega2"), default="omega2")

    scan = parser.add_argument_group("bending scan")
    scan.add_argument("--pair", type=int, default=1, help="bend (p_i, p_i+1), i in 1..5")
    scan.add_argument("--dtheta", type=float, default=SCAN_DTHETA)
    scan.add_argument("--steps-pos", type=int, default=SCAN_STEPS)
    scan.add_argument("--steps-neg", type=int, default=SCAN_STEPS)
    scan.add_argument("--theta-red", type=float, default=0.1,
                      help="closed-path starting bend of pair 1")
    return parser


def run(args: argparse.Namespace) -> int:
    try:
        tol = Tolerance(eq_tol=args.eq_tol, residual_tol=args.residual_tol, iso_tol=args.iso_tol)
    except ValueError as exc:
        logger.error("Invalid tolerance: %s", exc)
        return EXIT_INPUT

    if args.command == "verify-example":
        result = verify_example(args.input, tol=tol, output_path=args.output)
    elif args.command == "build":
        if args.s1 is None or args.s2 is None:
            logger.error("build needs --s1 and --s2")
            return EXIT_INPUT
        result = build(args.s1, args.s2, delta=args.delta, tau=args.tau, t45=args.t45,
                       root=args.root, s=args.s, tol=tol, output_path=args.output)
    elif args.input is None:
        logger.error("%s needs --input", args.command)
        return EXIT_INPUT
    elif args.command == "check":
        result = check(args.input, args.witness, tol=tol, output_path=args.output)
    elif args.command == "invariants":
        result = invariants(args.input, args.witness, tol=tol, output_path=args.output)
    elif args.command == "bend-scan":
        result = run_bend_scan(args.input, args.pair, args.dtheta, args.steps_pos, args.steps_neg,
                               tol=tol, output_format=args.format, output_path=args.output)
    else:
        result = closed_path(args.input, theta_red=args.theta_red, tol=tol, output_path=args.output)

    logger.info("%s: %s (exit %d)", args.command, result.message, result.exit_code)
    return result.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)

    logger.info("=" * 55)
    logger.info("  PU(2,1) Quadrangle Toolkit — %s", args.command)
    logger.info("=" * 55)

    # Validate configuration
    try:
        validate_config()
    except ConfigurationError as exc:
        logger.error("Configuration error: %s", exc)
        return 1

    return run(args)


if __name__ == "__main__":
    sys.exit(main())
