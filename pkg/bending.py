"""
Bending deformations of pentagon relations.

The centralizer of the loxodromic product R^{p_{i+1}}R^{p_i} contains the
one-parameter group B(θ) = diag(1, e^θ, e^{−θ}) in the basis (c, v1, v2).
Moving p_i and p_{i+1} by B(θ) keeps the product, hence the relation.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import RESIDUAL_BLOWUP_FACTOR
from errors import EigenFailure, FrameFailure, GeometryError, NotLoxodromic, ResidualBlowup
from hermitian import DEFAULT_TOL, Tolerance
from isometry import Isometry, LoxodromicFrame, loxodromic_frame, reflection
from pentagon import Pentagon, scaled_relation_residual
from quadrangle import QuadrangleReport, quadrangle_report
from triple_variety import RegularTriple, SurfaceCoords, coords_from_triple

logger = logging.getLogger(__name__)


# ── Bending subgroups ─────────────────────────────────────

@dataclass(frozen=True, eq=False)
class BendingPair:
    """The pair (p_i, p_{i+1}) of a pentagon together with the frame of R^{p_{i+1}}R^{p_i}."""

    i: int
    frame: LoxodromicFrame

    @property
    def basis_change(self) -> np.ndarray:
        return self.frame.basis_change


def bending_pair(pent: Pentagon, i: int, tol: Tolerance = DEFAULT_TOL) -> BendingPair:
    """
    Raises:
        ValueError: If i is not in 1..5.
        FrameFailure: If the product of the pair is not loxodromic or its
            eigen-structure cannot be resolved.
    """
    if i not in range(1, 6):
        raise ValueError(f"pair index must be in 1..5, got {i}")
    product = reflection(pent.point(i + 1)).compose(reflection(pent.point(i)))
    try:
        frame = loxodromic_frame(product, tol)
    except (NotLoxodromic, EigenFailure) as exc:
        raise FrameFailure(f"pair {i}: {exc}") from exc
    return BendingPair(i=i, frame=frame)


def bending(pair: BendingPair, theta: float) -> Isometry:
    """B(θ) = P·diag(1, e^θ, e^{−θ})·P⁻¹ with P = [c | v1 | v2]."""
    frame = pair.frame
    space = frame.c.space
    gram = space.gram
    # rows of P⁻¹ are the form-duals ⟨·,c⟩, ⟨·,v2⟩, ⟨·,v1⟩
    dual = np.vstack([
        gram @ frame.c.rep.conj(),
        gram @ frame.v2.rep.conj(),
        gram @ frame.v1.rep.conj(),
    ])
    scales = np.array([1.0, np.exp(theta), np.exp(-theta)])
    return Isometry(pair.basis_change @ np.diag(scales) @ dual, space)


def bend_pentagon(pent: Pentagon, i: int, theta: float, tol: Tolerance = DEFAULT_TOL,
                  pair: Optional[BendingPair] = None) -> Pentagon:
    """
    Replace p_i, p_{i+1} by B(θ)p_i, B(θ)p_{i+1}.

    Raises:
        FrameFailure: If the pair has no loxodromic frame.
        ResidualBlowup: If the scaled relation residual of the result
            exceeds RESIDUAL_BLOWUP_FACTOR × residual_tol.
    """
    if theta == 0:
        return pent
    pair = pair or bending_pair(pent, i, tol)
    b = bending(pair, theta)
    bent = pent.with_points({i: b.apply(pent.point(i)), i + 1: b.apply(pent.point(i + 1))})

    residual = scaled_relation_residual(bent)
    if residual > RESIDUAL_BLOWUP_FACTOR * tol.residual_tol:
        raise ResidualBlowup(f"pair {i}, θ = {theta:g}: relation residual {residual:.3e}")
    return bent


def composed_walk(pent: Pentagon, steps: Sequence[Tuple[int, float]],
                  tol: Tolerance = DEFAULT_TOL) -> Pentagon:
    """Apply bend_pentagon cumulatively for each (pair, θ) step."""
    current = pent
    for i, theta in steps:
        current = bend_pentagon(current, i, theta, tol)
    return current


def triple_coords(pent: Pentagon, tol: Tolerance = DEFAULT_TOL) -> SurfaceCoords:
    """Surface coordinates of the sub-triple (p₁, p₂, p₃)."""
    return coords_from_triple(RegularTriple(*pent.points[:3]), tol)


# ── Scans ─────────────────────────────────────────────────

@dataclass
class BendScanRow:
    theta: float
    coords: Optional[SurfaceCoords] = None
    report: Optional[QuadrangleReport] = None
    error: Optional[str] = None

    @property
    def all_ok(self) -> bool:
        return self.report is not None and self.report.all_ok


@dataclass(frozen=True)
class OkInterval:
    """Maximal run of passing rows around θ = 0 and the first failing θ on each side."""

    lower: Optional[float]
    upper: Optional[float]
    first_fail_below: Optional[float]
    first_fail_above: Optional[float]


def bend_scan(pent: Pentagon, i: int, dtheta: float, n_pos: int, n_neg: int,
              tol: Tolerance = DEFAULT_TOL) -> List[BendScanRow]:
    """
    Rows at θ = k·dθ for k = −n_neg..n_pos, each bent from `pent` itself,
    ordered by θ. Row failures are recorded, never raised.

    Raises:
        ValueError: If dθ is zero.
    """
    if dtheta == 0:
        raise ValueError("dtheta must be non-zero")
    pair = bending_pair(pent, i, tol)

    rows = []
    for k in range(-n_neg, n_pos + 1):
        theta = k * dtheta
        row = BendScanRow(theta=theta)
        try:
            bent = bend_pentagon(pent, i, theta, tol, pair=pair)
            row.coords = triple_coords(bent, tol)
            row.report = quadrangle_report(bent, tol=tol)
        except GeometryError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
            logger.debug("θ = %.4f: %s", theta, row.error)
        rows.append(row)

    rows.sort(key=lambda r: r.theta)
    passing = sum(1 for r in rows if r.all_ok)
    logger.info("Scan of pair %d: %d rows, %d pass all checks", i, len(rows), passing)
    return rows


def all_ok_interval(rows: List[BendScanRow]) -> OkInterval:
    """
    Read the passing interval around θ = 0 off scan rows sorted by θ.

    All fields are None if the row at θ = 0 fails; a first-failure field is
    None when the scan never fails on that side.
    """
    if not rows:
        return OkInterval(None, None, None, None)
    centre = min(range(len(rows)), key=lambda k: abs(rows[k].theta))
    if not rows[centre].all_ok:
        return OkInterval(None, None, None, None)

    lo = centre
    while lo > 0 and rows[lo - 1].all_ok:
        lo -= 1
    hi = centre
    while hi < len(rows) - 1 and rows[hi + 1].all_ok:
        hi += 1
    return OkInterval(
        lower=rows[lo].theta,
        upper=rows[hi].theta,
        first_fail_below=rows[lo - 1].theta if lo > 0 else None,
        first_fail_above=rows[hi + 1].theta if hi < len(rows) - 1 else None,
    )


# ── Closed paths ──────────────────────────────────────────

@dataclass(frozen=True)
class ClosedPathResult:
    theta_red: float
    phi: Optional[float]
    theta_vertical: Optional[float]
    coord_distance: Optional[float]
    walk_all_ok: Optional[bool]
    vertical_all_ok: Optional[bool]

    @property
    def found(self) -> bool:
        return (self.coord_distance is not None and self.coord_distance < 1e-6
                and self.walk_all_ok != self.vertical_all_ok)


def _brackets(f: Callable[[float], float], grid: np.ndarray, skip: float) -> List[Tuple[float, float]]:
    """Consecutive grid points with a sign change of f, not straddling `skip`."""
    values = []
    for x in grid:
        try:
            values.append(f(x))
        except GeometryError:
            values.append(float("nan"))
    found = []
    for k in range(len(grid) - 1):
        a, b = values[k], values[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if grid[k] <= skip <= grid[k + 1] or abs(grid[k] - skip) < 1e-12 or abs(grid[k + 1] - skip) < 1e-12:
            continue
        if a * b < 0:
            found.append((float(grid[k]), float(grid[k + 1])))
    found.sort(key=lambda ab: abs(0.5 * (ab[0] + ab[1]) - skip))
    return found


def _bisect(f: Callable[[float], float], lo: float, hi: float, iterations: int = 80) -> float:
    f_lo = f(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def find_closed_path(pent: Pentagon, theta_red: float = 0.1, span: float = 6.0,
                     step: float = 0.02, tol: Tolerance = DEFAULT_TOL) -> ClosedPathResult:
    """
    Bend pair (1,2) by theta_red, then pair (2,3) until s₁ returns to its
    starting value, and locate the pair-(1,2) bend of `pent` with the same
    surface coordinates. Both pentagons sit over one point of the surface;
    the result records whether their verdicts differ.
    """
    start = triple_coords(pent, tol)
    red = bend_pentagon(pent, 1, theta_red, tol)
    horizontal_pair = bending_pair(red, 2, tol)
    vertical_pair = bending_pair(pent, 1, tol)

    def s1_gap(phi: float) -> float:
        return triple_coords(bend_pentagon(red, 2, phi, tol, pair=horizontal_pair), tol).s1 - start.s1

    grid = np.arange(-span, span + step / 2, step)
    brackets = _brackets(s1_gap, grid, skip=0.0)
    if not brackets:
        logger.warning("No return to s1 = %.6g along pair 2 from θ = %g", start.s1, theta_red)
        return ClosedPathResult(theta_red, None, None, None, None, None)
    phi = _bisect(s1_gap, *brackets[0])

    walk = bend_pentagon(red, 2, phi, tol, pair=horizontal_pair)
    walk_coords = triple_coords(walk, tol)

    def s2_gap(theta: float) -> float:
        return triple_coords(bend_pentagon(pent, 1, theta, tol, pair=vertical_pair), tol).s2 - walk_coords.s2

    theta_brackets = _brackets(s2_gap, grid, skip=theta_red)
    best = None
    for lo, hi in theta_brackets:
        theta = _bisect(s2_gap, lo, hi)
        vertical = bend_pentagon(pent, 1, theta, tol, pair=vertical_pair)
        coords = triple_coords(vertical, tol)
        distance = max(abs(coords.s1 - walk_coords.s1), abs(coords.s2 - walk_coords.s2),
                       abs(coords.s - walk_coords.s))
        if best is None or distance < best[1]:
            best = (theta, distance, vertical)
    if best is None:
        return ClosedPathResult(theta_red, phi, None, None, None, None)

    theta_vertical, distance, vertical = best
    result = ClosedPathResult(
        theta_red=theta_red,
        phi=phi,
        theta_vertical=theta_vertical,
        coord_distance=distance,
        walk_all_ok=quadrangle_report(walk, tol=tol).all_ok,
        vertical_all_ok=quadrangle_report(vertical, tol=tol).all_ok,
    )
    logger.info("Closed path: φ = %.6f, θ_vertical = %.6f, distance %.2e, verdicts %s/%s",
                phi, theta_vertical, distance, result.walk_all_ok, result.vertical_all_ok)
    return result
