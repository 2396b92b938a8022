"""
Pentagon relations R^{p₅}R^{p₄}R^{p₃}R^{p₂}R^{p₁} = δ·Id with signs (+,−,−,−,−).

A pentagon is built from a point of the triple surface: the triple (p₁,p₂,p₃)
is realized from its coordinates, and (p₄,p₅) are placed on the axis of the
hyperbolic isometry F = R^{p₄}R^{p₅} = δ̄·R^{p₃}R^{p₂}R^{p₁}.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import (
    AxisFailure,
    ConditionViolation,
    DeltaOne,
    EigenFailure,
    GeometryError,
    NotHyperbolic,
    NotLoxodromic,
    TraceMismatch,
)
from hermitian import DEFAULT_TOL, HermitianSpace, ProjPoint, Tolerance, inner, sign, tance
from isometry import (
    IDENTITY,
    Isometry,
    IsometryTag,
    classify,
    compose_all,
    inf_norm,
    loxodromic_frame,
    reflection,
)
from triple_variety import SurfaceCoords, realize_triple

logger = logging.getLogger(__name__)

EXPECTED_SIGNS = (1, -1, -1, -1, -1)


class CubeRoot(str, Enum):
    """Cube roots of unity, stored symbolically."""

    ONE = "1"
    OMEGA = "omega"
    OMEGA2 = "omega2"

    @property
    def value_complex(self) -> complex:
        half_sqrt3 = np.sqrt(3.0) / 2.0
        return {
            CubeRoot.ONE: 1.0 + 0j,
            CubeRoot.OMEGA: complex(-0.5, half_sqrt3),
            CubeRoot.OMEGA2: complex(-0.5, -half_sqrt3),
        }[self]

    def conjugate(self) -> "CubeRoot":
        return {
            CubeRoot.ONE: CubeRoot.ONE,
            CubeRoot.OMEGA: CubeRoot.OMEGA2,
            CubeRoot.OMEGA2: CubeRoot.OMEGA,
        }[self]


# ── Pentagon ──────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Pentagon:
    """
    Five points whose reflections multiply to δ·Id.

    The relation is not enforced on construction; p_conditions reports it.
    """

    space: HermitianSpace
    points: Tuple[ProjPoint, ProjPoint, ProjPoint, ProjPoint, ProjPoint]
    delta: CubeRoot = CubeRoot.OMEGA2

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if len(points) != 5:
            raise ValueError(f"A pentagon needs 5 points, got {len(points)}")
        if any(p.space is not self.space for p in points):
            raise ValueError("All pentagon points must live in the pentagon's space")
        object.__setattr__(self, "points", points)

    def point(self, i: int) -> ProjPoint:
        """The point p_i, 1-based with indices taken mod 5."""
        return self.points[(i - 1) % 5]

    def reflections(self) -> List[Isometry]:
        return [reflection(p) for p in self.points]

    def transformed(self, isometry: Isometry) -> "Pentagon":
        """The conjugate pentagon (I·p₁, …, I·p₅)."""
        return Pentagon(self.space, tuple(isometry.apply(p) for p in self.points), self.delta)

    def with_points(self, replacements: Dict[int, ProjPoint]) -> "Pentagon":
        points = list(self.points)
        for i, p in replacements.items():
            points[(i - 1) % 5] = p
        return Pentagon(self.space, tuple(points), self.delta)


def _relation_parts(pent: Pentagon) -> Tuple[float, float]:
    mats = [r.mat for r in reversed(pent.reflections())]
    product = np.linalg.multi_dot(mats)
    raw = inf_norm(product - pent.delta.value_complex * IDENTITY)
    scale = float(np.prod([inf_norm(m) for m in mats]))
    return raw, max(1.0, scale)


def relation_residual(pent: Pentagon) -> float:
    """‖R^{p₅}R^{p₄}R^{p₃}R^{p₂}R^{p₁} − δ·Id‖∞ with reflections rebuilt from the points."""
    return _relation_parts(pent)[0]


def relation_scale(pent: Pentagon) -> float:
    """∏‖R^{p_i}‖∞, the size of the product before cancellation (at least 1)."""
    return _relation_parts(pent)[1]


def scaled_relation_residual(pent: Pentagon) -> float:
    """
    relation_residual divided by relation_scale.

    This is the quantity compared against residual_tol. It keeps its size
    when the pentagon is moved by an isometry with large entries.
    """
    raw, scale = _relation_parts(pent)
    return raw / scale


def reindex_relation(pent: Pentagon) -> Pentagon:
    """
    The same relation read as R^{p₂}R^{p₃}R^{p₄}R^{p₅}R^{p₁} = δ̄.

    Returned as a Pentagon (p₁, p₅, p₄, p₃, p₂) with δ̄, so the sign list
    stays (+,−,−,−,−).
    """
    p1, p2, p3, p4, p5 = pent.points
    return Pentagon(pent.space, (p1, p5, p4, p3, p2), pent.delta.conjugate())


def conjugate_pentagon(pent: Pentagon, isometry: Isometry) -> Pentagon:
    return pent.transformed(isometry)


# ── Conditions (P1–P3) ────────────────────────────────────

@dataclass
class PConditionReport:
    tances: Dict[str, float] = field(default_factory=dict)
    distinct: Dict[str, bool] = field(default_factory=dict)
    signs: List[int] = field(default_factory=list)
    residual: float = float("nan")
    scaled_residual: float = float("nan")
    p1_ok: bool = False
    p2_ok: bool = False
    p3_ok: bool = False

    @property
    def ok(self) -> bool:
        return self.p1_ok and self.p2_ok and self.p3_ok

    def first_failure(self) -> Optional[str]:
        if not self.p3_ok:
            return f"relation residual {self.scaled_residual:.3e} (raw {self.residual:.3e})"
        if not self.p2_ok:
            return f"sign list {self.signs}"
        if not self.p1_ok:
            bad = [name for name, ok in self.distinct.items() if not ok]
            return f"tance 0 or 1 at {', '.join(bad)}"
        return None


def p_conditions(pent: Pentagon, tol: Tolerance = DEFAULT_TOL) -> PConditionReport:
    """
    Pairwise tances away from 0 and 1 (P1), the sign list (P2) and the
    relation residual (P3).
    """
    report = PConditionReport()
    report.signs = [sign(p, tol) for p in pent.points]

    for i, j in combinations(range(1, 6), 2):
        name = f"p{i}p{j}"
        try:
            value = tance(pent.point(i), pent.point(j), tol)
        except GeometryError:
            value = float("nan")
        report.tances[name] = value
        report.distinct[name] = bool(
            np.isfinite(value) and abs(value) > tol.eq_tol and abs(value - 1.0) > tol.eq_tol
        )

    try:
        raw, scale = _relation_parts(pent)
        report.residual = raw
        report.scaled_residual = raw / scale
    except GeometryError:
        report.residual = float("inf")
        report.scaled_residual = float("inf")

    report.p1_ok = all(report.distinct.values())
    report.p2_ok = tuple(report.signs) == EXPECTED_SIGNS
    report.p3_ok = report.scaled_residual < tol.residual_tol
    return report


# ── Construction ──────────────────────────────────────────

def _axis_point(frame, u: float) -> ProjPoint:
    """x(u) = e^u·v1 − e^{−u}·v2, a negative point with ⟨x,x⟩ = −2."""
    return ProjPoint(np.exp(u) * frame.v1.rep - np.exp(-u) * frame.v2.rep, frame.v1.space)


def _axis_parameter(frame, anchor: ProjPoint) -> float:
    """Parameter of the orthogonal projection of `anchor` onto the axis."""
    a = abs(inner(frame.v1, anchor))
    b = abs(inner(frame.v2, anchor))
    if a == 0 or b == 0:
        raise AxisFailure("anchor projects to an endpoint of the axis")
    return 0.5 * float(np.log(b / a))


def decompose_loxodromic(F: Isometry, t45: float, anchor: Optional[ProjPoint] = None,
                         axis_offset: float = 0.0,
                         tol: Tolerance = DEFAULT_TOL) -> Tuple[ProjPoint, ProjPoint]:
    """
    Write a hyperbolic isometry as F = R^{p₄}R^{p₅} with p₄, p₅ negative.

    The midpoint of (p₄,p₅) is the projection of `anchor` onto the axis of F
    (the axis point x(0) without an anchor), shifted by `axis_offset`.

    Raises:
        NotHyperbolic: If tr F is not real and greater than 3, or t45 ≤ 1.
        TraceMismatch: If t45 ≠ (tr F + 1)/4.
        AxisFailure: If the axis cannot be computed or the recomposed
            product misses F.
    """
    trace = F.trace
    scale = max(1.0, abs(trace))
    if (classify(F, tol).tag != IsometryTag.LOXODROMIC
            or abs(trace.imag) > tol.eq_tol * scale or trace.real <= 3.0 + tol.eq_tol):
        raise NotHyperbolic(f"trace {trace:.6g} is not real and greater than 3")
    if t45 <= 1.0:
        raise NotHyperbolic(f"t45 = {t45} must exceed 1")
    if abs((trace.real + 1.0) / 4.0 - t45) > tol.eq_tol * scale:
        raise TraceMismatch(f"t45 = {t45} but (tr F + 1)/4 = {(trace.real + 1.0) / 4.0:.12g}")

    try:
        frame = loxodromic_frame(F, tol)
    except (EigenFailure, NotLoxodromic) as exc:
        raise AxisFailure(f"no loxodromic frame: {exc}") from exc

    lam1 = frame.eigenvalues[0]
    if abs(lam1.imag) > tol.eq_tol * abs(lam1) or lam1.real <= 0:
        raise AxisFailure(f"dominant eigenvalue {lam1:.6g} is not real positive")
    half_length = 0.5 * float(np.log(lam1.real))

    mid = _axis_parameter(frame, anchor) if anchor is not None else 0.0
    mid += axis_offset
    p4 = _axis_point(frame, mid + half_length / 2.0)
    p5 = _axis_point(frame, mid - half_length / 2.0)

    residual = inf_norm(reflection(p4).compose(reflection(p5)).mat - F.mat)
    if residual > tol.residual_tol * max(1.0, inf_norm(F.mat)):
        raise AxisFailure(f"R^p4 R^p5 misses F by {residual:.3e}")
    logger.debug("Decomposed F: ta(p4,p5) = %.12g, residual %.2e", tance(p4, p5, tol), residual)
    return p4, p5


def build_pentagon(coords: SurfaceCoords, delta: CubeRoot = CubeRoot.OMEGA2,
                   axis_offset: float = 0.0, tol: Tolerance = DEFAULT_TOL) -> Pentagon:
    """
    Build a pentagon from a surface point and a cube root δ ∈ {ω, ω²}.

    Requires δ̄·τ real and greater than 3. The pair (p₄,p₅) is centred on the
    projection of p₂ onto the axis of F.

    Raises:
        DeltaOne: If δ = 1.
        TraceMismatch: If δ̄·τ is not real and greater than 3.
        ConditionViolation: If the result fails (P1–P3).
    """
    delta = CubeRoot(delta)
    if delta == CubeRoot.ONE:
        raise DeltaOne("no pentagon with signs (+,−,−,−,−) satisfies the relation with δ = 1")

    twisted = np.conj(delta.value_complex) * complex(coords.tau)
    scale = max(1.0, abs(twisted))
    if abs(twisted.imag) > tol.eq_tol * scale or twisted.real <= 3.0 + tol.eq_tol:
        raise TraceMismatch(f"conj(delta)·tau = {twisted:.6g} is not real and greater than 3")

    space, triple = realize_triple(coords, tol)
    product = compose_all([reflection(triple.p3), reflection(triple.p2), reflection(triple.p1)])
    F = Isometry(np.conj(delta.value_complex) * product.mat, space, tol)

    t45 = (F.trace.real + 1.0) / 4.0
    p4, p5 = decompose_loxodromic(F, t45, anchor=triple.p2, axis_offset=axis_offset, tol=tol)

    pent = Pentagon(space, (triple.p1, triple.p2, triple.p3, p4, p5), delta)
    report = p_conditions(pent, tol)
    if not report.ok:
        raise ConditionViolation(f"built pentagon fails: {report.first_failure()}")
    logger.info("Built pentagon: t45 = %.6g, residual %.2e", t45, report.scaled_residual)
    return pent
