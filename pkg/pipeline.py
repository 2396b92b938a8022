"""
Pipeline orchestration — wires ingestion, the geometric checks and output.

Each command returns a CommandResult carrying an exit code from the
contract below, the JSON-ready payload, and a one-line message naming the
first failing gate when there is one.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from bending import all_ok_interval, bend_scan, find_closed_path
from errors import DeltaOne, GeometryError, InvalidCoords, NotHyperbolic, PatternMismatch, TraceMismatch
from hermitian import DEFAULT_TOL, ProjPoint, Tolerance, projectively_equal
from ingestion import PentagonFile, load_fixture, load_pentagon, parse_point_text
from invariants import euler_from_toledo, euler_number, toledo
from output import (
    certificate_payload,
    closed_path_payload,
    coords_payload,
    fraction_payload,
    interval_payload,
    p_report_payload,
    pentagon_payload,
    quadrangle_payload,
    scan_row_dict,
    toledo_payload,
    write_json,
    write_scan_csv,
)
from pentagon import CubeRoot, build_pentagon, p_conditions
from quadrangle import quadrangle_report
from triple_variety import SignTriple, SurfaceCoords, solve_s, validate_coords

logger = logging.getLogger(__name__)

# ── Exit codes ────────────────────────────────────────────
EXIT_OK = 0
EXIT_VERIFICATION = 2
EXIT_CONSTRUCTION = 3
EXIT_INPUT = 4
EXIT_PRECONDITION = 5

EXPECTED_TOLEDO = Fraction(-1, 3)
EXPECTED_EULER = Fraction(0)
BUILD_SIGNS = SignTriple(1, -1, -1)
BOUNDARY_POINT_KEYS = ("z_clockwise", "z_counterclockwise")


@dataclass
class CommandResult:
    exit_code: int
    message: str = ""
    payload: Dict = field(default_factory=dict)
    output_path: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def _input_failure(exc: Exception) -> CommandResult:
    logger.error("Input failure: %s", exc)
    return CommandResult(EXIT_INPUT, message=f"input: {exc}")


def _resolve_witness(parsed: PentagonFile, witness_text: Optional[str]) -> Optional[ProjPoint]:
    if witness_text:
        return parse_point_text(witness_text, parsed.pentagon.space)
    return parsed.witness


def _boundary_points(parsed: PentagonFile) -> Dict[str, ProjPoint]:
    return {key: parsed.reference[key] for key in BOUNDARY_POINT_KEYS if key in parsed.reference}


# ── verify-example ────────────────────────────────────────

def verify_example(fixture_path: Optional[Union[str, Path]] = None,
                   tol: Tolerance = DEFAULT_TOL,
                   output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """
    Reproduce the worked example: (P1–P3), Q1–Q4, τ = −1/3 and e = 0.

    Exit 2 names the first failing gate; exit 4 means the fixture could not
    be read.
    """
    logger.info("[1] Loading fixture...")
    try:
        parsed = load_fixture(fixture_path)
    except (FileNotFoundError, ValueError) as exc:
        return _input_failure(exc)
    pent = parsed.pentagon
    payload: Dict = {"source": str(parsed.source)}

    logger.info("[2] Checking the pentagon relation...")
    p_report = p_conditions(pent, tol)
    payload["p_conditions"] = p_report_payload(p_report)
    if not p_report.ok:
        return _verification_failure(payload, f"P: {p_report.first_failure()}", output_path)

    logger.info("[3] Checking the quadrangle conditions...")
    report = quadrangle_report(pent, parsed.witness, tol)
    payload["quadrangle"] = quadrangle_payload(report)
    if not report.all_ok:
        return _verification_failure(payload, report.failure or "quadrangle", output_path)

    logger.info("[4] Computing invariants...")
    try:
        t_result = toledo(pent, parsed.witness, tol=tol)
        payload["toledo"] = toledo_payload(t_result)
        cert = euler_number(pent, boundary_points=_boundary_points(parsed),
                            z1_reference=parsed.reference.get("z1"), tol=tol)
    except PatternMismatch as exc:
        if exc.certificate is not None:
            payload["euler"] = certificate_payload(exc.certificate)
        return _verification_failure(payload, f"euler: {exc}", output_path)
    except GeometryError as exc:
        return _verification_failure(payload, f"{type(exc).__name__}: {exc}", output_path)
    payload["euler"] = certificate_payload(cert)
    cross = euler_from_toledo(t_result.tau, t_result.chi)
    payload["euler_from_toledo"] = fraction_payload(cross)
    payload["reference_matches"] = _reference_matches(parsed, cert, tol)

    if t_result.tau != EXPECTED_TOLEDO:
        return _verification_failure(payload, f"toledo: τ = {t_result.tau}", output_path)
    if cert.e != EXPECTED_EULER or cross != cert.e:
        return _verification_failure(payload, f"euler: e = {cert.e}, from τ {cross}", output_path)

    _log_example_table(p_report.residual, report, t_result.tau, cert.e)
    path = write_json(payload, "verify_example.json", output_path)
    return CommandResult(EXIT_OK, message="worked example verified", payload=payload, output_path=path)


def _reference_matches(parsed: PentagonFile, cert, tol: Tolerance) -> Dict[str, bool]:
    """Projective agreement of the certificate's points with the printed ones."""
    computed = {"m": cert.m, "z1": cert.z1}
    computed.update({f"m{k}": m for k, m in enumerate(cert.ms, start=1)})
    matches = {}
    for key, point in computed.items():
        if key in parsed.reference and point is not None:
            matches[key] = projectively_equal(point, parsed.reference[key], tol)
    mismatched = [key for key, ok in matches.items() if not ok]
    if mismatched:
        logger.warning("Computed points differ from the reference: %s", ", ".join(mismatched))
    return matches


def _verification_failure(payload: Dict, reason: str,
                          output_path: Optional[Union[str, Path]]) -> CommandResult:
    logger.warning("Verification failed: %s", reason)
    payload["failure"] = reason
    path = write_json(payload, "verify_example.json", output_path)
    return CommandResult(EXIT_VERIFICATION, message=reason, payload=payload, output_path=path)


def _log_example_table(residual: float, report, tau: Fraction, e: Fraction) -> None:
    logger.info("")
    logger.info("=" * 55)
    logger.info("  WORKED EXAMPLE")
    logger.info("=" * 55)
    logger.info("  %-28s %s", "relation residual", f"{residual:.3e}")
    for name, value in report.tances.items():
        logger.info("  %-28s %.10f", f"ta(q{name[0]},q{name[1]})", value)
    for name in ("eps0", "eps1", "chi0", "chi1", "q4_bracket_r5x", "angle_sum"):
        if name in report.extras:
            logger.info("  %-28s %.10f", name, report.extras[name])
    for name, value in report.slacks.items():
        logger.info("  %-28s %.10f", name, value)
    logger.info("  %-28s %s", "Toledo invariant", tau)
    logger.info("  %-28s %s", "Euler number", e)


# ── build ─────────────────────────────────────────────────

def resolve_build_coords(s1: float, s2: float, delta: CubeRoot, tau: Optional[complex] = None,
                         t45: Optional[float] = None, root: Optional[int] = None,
                         s: Optional[float] = None, tol: Tolerance = DEFAULT_TOL) -> SurfaceCoords:
    """
    Surface coordinates for a build from (s₁, s₂) and either τ or t45.

    With only t45 given, τ = δ·(4·t45 − 1). The third coordinate is the root
    of the surface equation nearest to `s`, the root at index `root` in
    ascending order, or the larger root.

    Raises:
        NotHyperbolic: If t45 ≤ 1.
        TraceMismatch: If τ and t45 disagree.
        GeometryError: If the coordinates are invalid (InvalidCoords).
        ValueError: If neither τ nor t45 is given or `root` is out of range.
    """
    if t45 is not None and t45 <= 1.0:
        raise NotHyperbolic(f"t45 = {t45} must exceed 1")
    if tau is None:
        if t45 is None:
            raise ValueError("build needs --tau or --t45")
        tau = delta.value_complex * (4.0 * t45 - 1.0)
    elif t45 is not None:
        implied = (np.conj(delta.value_complex) * complex(tau)).real
        if abs((implied + 1.0) / 4.0 - t45) > tol.eq_tol * max(1.0, abs(tau)):
            raise TraceMismatch(f"t45 = {t45} but tau implies {(implied + 1.0) / 4.0:.12g}")

    kappa = (complex(tau) - 3.0) / 8.0
    roots = solve_s(s1, s2, kappa, tol)
    if not roots:
        raise InvalidCoords(f"no real s solves the surface equation at s1 = {s1}, s2 = {s2}")
    if s is not None:
        chosen = min(roots, key=lambda r: abs(r - s))
    elif root is not None:
        if not -len(roots) <= root < len(roots):
            raise ValueError(f"root index {root} out of range for {len(roots)} root(s)")
        chosen = roots[root]
    else:
        chosen = roots[-1]
    logger.info("Surface roots %s, using s = %.12g", [f"{r:.10g}" for r in roots], chosen)

    coords = SurfaceCoords(s1=s1, s2=s2, s=chosen, sigma=BUILD_SIGNS, tau=complex(tau))
    validate_coords(coords, tol)
    return coords


def build(s1: float, s2: float, delta: Union[str, CubeRoot] = CubeRoot.OMEGA2,
          tau: Optional[complex] = None, t45: Optional[float] = None,
          root: Optional[int] = None, s: Optional[float] = None,
          tol: Tolerance = DEFAULT_TOL,
          output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """Build a pentagon from surface parameters and write it as pentagon JSON."""
    logger.info("[1] Resolving surface coordinates...")
    try:
        delta = CubeRoot(delta)
    except ValueError as exc:
        return _input_failure(exc)
    try:
        if delta == CubeRoot.ONE:
            raise DeltaOne("no pentagon with signs (+,−,−,−,−) satisfies the relation with δ = 1")
        coords = resolve_build_coords(s1, s2, delta, tau, t45, root, s, tol)
        logger.info("[2] Building pentagon...")
        pent = build_pentagon(coords, delta, tol=tol)
    except GeometryError as exc:
        reason = f"{type(exc).__name__}: {exc}"
        logger.error("Construction failed: %s", reason)
        return CommandResult(EXIT_CONSTRUCTION, message=reason)
    except ValueError as exc:
        return _input_failure(exc)

    p_report = p_conditions(pent, tol)
    report = quadrangle_report(pent, tol=tol)
    logger.info("[3] Writing pentagon...")
    t45_built = (np.conj(delta.value_complex) * coords.tau).real / 4.0 + 0.25
    payload = pentagon_payload(pent, coords=coords, t45=float(t45_built),
                               description="built from surface coordinates")
    path = write_json(payload, "pentagon.json", output_path)
    logger.info("Conditions (P1–P3): %s, quadrangle all_ok: %s", p_report.ok, report.all_ok)
    return CommandResult(
        EXIT_OK,
        message=f"pentagon written (all_ok = {report.all_ok})",
        payload={"pentagon": payload, "p_conditions": p_report_payload(p_report),
                 "quadrangle": quadrangle_payload(report)},
        output_path=path,
    )


# ── check / invariants ────────────────────────────────────

def check(input_path: Union[str, Path], witness_text: Optional[str] = None,
          tol: Tolerance = DEFAULT_TOL,
          output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """Run (P1–P3) and Q1–Q4 on a pentagon file. Exit 2 when any check fails."""
    logger.info("[1] Loading pentagon...")
    try:
        parsed = load_pentagon(input_path)
        witness = _resolve_witness(parsed, witness_text)
    except (FileNotFoundError, ValueError) as exc:
        return _input_failure(exc)

    logger.info("[2] Checking conditions...")
    p_report = p_conditions(parsed.pentagon, tol)
    report = quadrangle_report(parsed.pentagon, witness, tol)
    payload = {"p_conditions": p_report_payload(p_report), "quadrangle": quadrangle_payload(report)}
    if parsed.coords is not None:
        payload["coords"] = coords_payload(parsed.coords)
    path = write_json(payload, "check.json", output_path)

    if not p_report.ok:
        reason = f"P: {p_report.first_failure()}"
    elif not report.all_ok:
        reason = report.failure or "quadrangle"
    else:
        return CommandResult(EXIT_OK, message="all checks pass", payload=payload, output_path=path)
    logger.warning("Check failed: %s", reason)
    return CommandResult(EXIT_VERIFICATION, message=reason, payload=payload, output_path=path)


def invariants(input_path: Union[str, Path], witness_text: Optional[str] = None,
               tol: Tolerance = DEFAULT_TOL,
               output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """
    Toledo invariant and Euler certificate of a pentagon file.

    Refuses with exit 5 unless the pentagon passes (P1–P3) and Q1–Q4.
    """
    logger.info("[1] Loading pentagon...")
    try:
        parsed = load_pentagon(input_path)
        witness = _resolve_witness(parsed, witness_text)
    except (FileNotFoundError, ValueError) as exc:
        return _input_failure(exc)
    pent = parsed.pentagon

    logger.info("[2] Checking preconditions...")
    p_report = p_conditions(pent, tol)
    report = quadrangle_report(pent, witness, tol)
    if not (p_report.ok and report.all_ok):
        reason = (f"P: {p_report.first_failure()}" if not p_report.ok
                  else report.failure or "quadrangle")
        logger.error("Invariants need a pentagon passing all checks: %s", reason)
        return CommandResult(EXIT_PRECONDITION, message=f"precondition: {reason}",
                             payload={"quadrangle": quadrangle_payload(report)})

    logger.info("[3] Computing invariants...")
    payload: Dict = {}
    try:
        t_result = toledo(pent, witness, tol=tol)
        payload["toledo"] = toledo_payload(t_result)
        payload["euler_from_toledo"] = fraction_payload(euler_from_toledo(t_result.tau, t_result.chi))
        cert = euler_number(pent, boundary_points=_boundary_points(parsed),
                            z1_reference=parsed.reference.get("z1"), tol=tol)
    except PatternMismatch as exc:
        if exc.certificate is not None:
            payload["euler"] = certificate_payload(exc.certificate)
        reason = f"euler: {exc}"
    except GeometryError as exc:
        reason = f"{type(exc).__name__}: {exc}"
    else:
        payload["euler"] = certificate_payload(cert)
        path = write_json(payload, "invariants.json", output_path)
        logger.info("Toledo invariant %s, Euler number %s", t_result.tau, cert.e)
        return CommandResult(EXIT_OK, message=f"tau = {t_result.tau}, e = {cert.e}",
                             payload=payload, output_path=path)

    logger.warning("Invariants failed: %s", reason)
    payload["failure"] = reason
    path = write_json(payload, "invariants.json", output_path)
    return CommandResult(EXIT_VERIFICATION, message=reason, payload=payload, output_path=path)


# ── bend-scan ─────────────────────────────────────────────

def run_bend_scan(input_path: Union[str, Path], pair: int, dtheta: float, n_pos: int, n_neg: int,
                  tol: Tolerance = DEFAULT_TOL, output_format: str = "csv",
                  output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """
    Scan bendings of one pair and write the rows. Failing rows are data;
    only unusable input exits non-zero.
    """
    if output_format not in ("csv", "json"):
        return _input_failure(ValueError(f"unknown output format {output_format!r}"))
    if n_pos < 0 or n_neg < 0:
        return _input_failure(ValueError("step counts must be non-negative"))

    logger.info("[1] Loading pentagon...")
    try:
        parsed = load_pentagon(input_path)
        logger.info("[2] Scanning pair %d with dθ = %g...", pair, dtheta)
        rows = bend_scan(parsed.pentagon, pair, dtheta, n_pos, n_neg, tol)
    except (FileNotFoundError, ValueError, GeometryError) as exc:
        return _input_failure(exc)

    interval = all_ok_interval(rows)
    logger.info("[3] Writing scan...")
    payload = {"pair": pair, "dtheta": dtheta, "interval": interval_payload(interval),
               "rows": [scan_row_dict(row) for row in rows]}
    if output_format == "csv":
        path = write_scan_csv(rows, output_path)
    else:
        path = write_json(payload, "bend_scan.json", output_path)
    logger.info("All-ok interval [%s, %s]", interval.lower, interval.upper)
    return CommandResult(EXIT_OK, message=f"{len(rows)} rows", payload=payload, output_path=path)


# ── closed-path ───────────────────────────────────────────

def closed_path(input_path: Union[str, Path], theta_red: float = 0.1,
                tol: Tolerance = DEFAULT_TOL,
                output_path: Optional[Union[str, Path]] = None) -> CommandResult:
    """
    Search for two bendings of a pentagon over one surface point with
    different verdicts. Exit 2 when the search finds no such pair.
    """
    logger.info("[1] Loading pentagon...")
    try:
        parsed = load_pentagon(input_path)
    except (FileNotFoundError, ValueError) as exc:
        return _input_failure(exc)

    logger.info("[2] Searching for a closed path from θ = %g...", theta_red)
    try:
        result = find_closed_path(parsed.pentagon, theta_red=theta_red, tol=tol)
    except GeometryError as exc:
        return _input_failure(exc)

    payload = closed_path_payload(result)
    path = write_json(payload, "closed_path.json", output_path)
    if not result.found:
        return CommandResult(EXIT_VERIFICATION, message="no closed path with differing verdicts",
                             payload=payload, output_path=path)
    return CommandResult(EXIT_OK, message=f"closed path at phi = {result.phi:.6f}",
                         payload=payload, output_path=path)
