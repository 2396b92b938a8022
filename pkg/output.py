"""
Output module — serializes reports and writes them as JSON or CSV.

Floats are written with Python's shortest round-trip repr; non-finite values
become null (JSON) or an empty cell (CSV). Field order is fixed so repeated
runs produce byte-identical files.
"""

import csv
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from bending import BendScanRow, ClosedPathResult, OkInterval
from config import OUTPUT_DIR
from hermitian import ProjPoint
from invariants import EulerCertificate, ToledoResult
from pentagon import PConditionReport, Pentagon
from quadrangle import QuadrangleReport
from triple_variety import SurfaceCoords

logger = logging.getLogger(__name__)

SLACK_COLUMNS = [
    "t12", "t23", "t34", "t41", "t13", "t42",
    "eps1", "tri123_a", "tri123_b", "tri123_c",
    "chi1", "tri134_a", "tri134_b", "tri134_c",
    "transv_q3", "transv_q1", "sector_23", "sector_12",
    "q4_bracket",
]

SCAN_FIELDNAMES = [
    "theta",
    "s1",
    "s2",
    "s",
    "q1",
    "q2",
    "q3",
    "q4",
    "all",
    "failure",
] + SLACK_COLUMNS


# ── Scalars ───────────────────────────────────────────────

def number(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


def complex_pair(value: complex) -> List[Optional[float]]:
    value = complex(value)
    return [number(value.real), number(value.imag)]


def fraction_payload(value: Optional[Fraction]) -> Optional[Dict]:
    if value is None:
        return None
    return {"exact": str(value), "value": float(value)}


def point_payload(p: ProjPoint) -> List[List[Optional[float]]]:
    return [complex_pair(z) for z in p.rep]


# ── Reports ───────────────────────────────────────────────

def coords_payload(coords: SurfaceCoords) -> Dict:
    return {
        "s1": number(coords.s1),
        "s2": number(coords.s2),
        "s": number(coords.s),
        "sigma": list(coords.sigma.as_tuple()),
        "tau": complex_pair(coords.tau),
    }


def pentagon_payload(pent: Pentagon, coords: Optional[SurfaceCoords] = None,
                     t45: Optional[float] = None, witness: Optional[ProjPoint] = None,
                     description: str = "") -> Dict:
    """A pentagon in the file format read by ingestion.load_pentagon."""
    payload: Dict = {"version": 1}
    if description:
        payload["description"] = description
    if coords is not None:
        payload["coords"] = coords_payload(coords)
    if t45 is not None:
        payload["t45"] = number(t45)
    payload["delta"] = pent.delta.value
    payload["gram"] = [[complex_pair(z) for z in row] for row in pent.space.gram]
    payload["points"] = {f"p{i}": point_payload(pent.point(i)) for i in range(1, 6)}
    if witness is not None:
        payload["witness"] = point_payload(witness)
    return payload


def p_report_payload(report: PConditionReport) -> Dict:
    return {
        "ok": report.ok,
        "p1_ok": report.p1_ok,
        "p2_ok": report.p2_ok,
        "p3_ok": report.p3_ok,
        "signs": list(report.signs),
        "residual": number(report.residual),
        "scaled_residual": number(report.scaled_residual),
        "tances": {name: number(v) for name, v in report.tances.items()},
        "failure": report.first_failure(),
    }


def quadrangle_payload(report: QuadrangleReport) -> Dict:
    return {
        "all_ok": report.all_ok,
        "q1_ok": report.q1_ok,
        "q2_ok": report.q2_ok,
        "q3_ok": report.q3_ok,
        "q4_ok": report.q4_ok,
        "failure": report.failure,
        "tances": {name: number(v) for name, v in report.tances.items()},
        "slacks": {name: number(v) for name, v in report.slacks.items()},
        "angles": [number(a) for a in report.angles],
        "extras": {name: number(v) for name, v in report.extras.items()},
    }


def toledo_payload(result: ToledoResult) -> Dict:
    return {
        "raw_mod2": number(result.raw_mod2),
        "tau": fraction_payload(result.tau),
        "chi": fraction_payload(result.chi),
        "ratio": fraction_payload(result.ratio),
        "vertex_products": [number(v) for v in result.vertex_products],
    }


def certificate_payload(cert: EulerCertificate) -> Dict:
    return {
        "e": fraction_payload(cert.e),
        "gates": dict(cert.gates),
        "failed_gates": cert.failed_gates(),
        "direction_tests": {name: number(v) for name, v in cert.direction_tests.items()},
        "segment_signs": [str(s) for s in cert.segment_signs],
        "eigenvalue": complex_pair(cert.eigenvalue),
        "m": point_payload(cert.m) if cert.m is not None else None,
        "ms": [point_payload(m) for m in cert.ms],
        "z1": point_payload(cert.z1) if cert.z1 is not None else None,
    }


def interval_payload(interval: OkInterval) -> Dict:
    return {
        "lower": number(interval.lower),
        "upper": number(interval.upper),
        "first_fail_below": number(interval.first_fail_below),
        "first_fail_above": number(interval.first_fail_above),
    }


def closed_path_payload(result: ClosedPathResult) -> Dict:
    return {
        "found": result.found,
        "theta_red": number(result.theta_red),
        "phi": number(result.phi),
        "theta_vertical": number(result.theta_vertical),
        "coord_distance": number(result.coord_distance),
        "walk_all_ok": result.walk_all_ok,
        "vertical_all_ok": result.vertical_all_ok,
    }


def scan_row_dict(row: BendScanRow) -> Dict:
    """One CSV row; flags are true/false, or empty when a check was not evaluated."""

    def flag(value: Optional[bool]) -> str:
        return "" if value is None else str(bool(value)).lower()

    def cell(value) -> Union[float, str]:
        value = number(value)
        return "" if value is None else value

    report = row.report
    coords = row.coords
    out = {
        "theta": row.theta,
        "s1": cell(coords.s1) if coords else "",
        "s2": cell(coords.s2) if coords else "",
        "s": cell(coords.s) if coords else "",
        "q1": flag(report.q1_ok) if report else "",
        "q2": flag(report.q2_ok) if report else "",
        "q3": flag(report.q3_ok) if report else "",
        "q4": flag(report.q4_ok) if report else "",
        "all": flag(row.all_ok),
        "failure": row.error or (report.failure if report else "") or "",
    }
    slacks = report.slacks if report else {}
    for name in SLACK_COLUMNS:
        out[name] = cell(slacks.get(name))
    return out


# ── Writers ───────────────────────────────────────────────

def _target(output_path: Optional[Union[str, Path]], default_name: str) -> Path:
    if output_path is not None:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    return OUTPUT_DIR / default_name


def render_json(payload: Dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(payload: Dict, default_name: str,
               output_path: Optional[Union[str, Path]] = None) -> str:
    """
    Write a JSON payload.

    Returns the path to the output file.
    """
    path = _target(output_path, default_name)
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_json(payload))
    logger.info("Output saved to: %s", path)
    return str(path)


def write_scan_csv(rows: List[BendScanRow], output_path: Optional[Union[str, Path]] = None,
                   default_name: str = "bend_scan.csv") -> str:
    """
    Write bending-scan rows to CSV, one row per θ in the order given.

    Returns the path to the output file.
    """
    path = _target(output_path, default_name)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=SCAN_FIELDNAMES)
        writer.writeheader()
        writer.writerows(scan_row_dict(row) for row in rows)

    logger.info("Output saved to: %s", path)
    return str(path)
