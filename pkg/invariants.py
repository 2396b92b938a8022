"""
Toledo invariant and Euler number of the disc orbibundle defined by a
pentagon whose quadrangle passes Q1–Q4.

The Toledo invariant comes from a closed arg formula along the vertex cycle
x₁ → x₂ → x₃ → x₄. The Euler number is certified by building a section over
the boundary of the quadrangle from meridional curves and checking the
direction of motion of boundary points under the holonomies involved.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import COINCIDENCE_TOL, TOLEDO_MAX_DENOMINATOR, TOLEDO_SNAP_TOL
from errors import (
    BadN,
    DegenerateSpan,
    NotHyperbolicOnSlice,
    NotInvariant,
    NotOnBoundary,
    NotUltraparallel,
    PatternMismatch,
    RealPartNonzero,
    SideAmbiguous,
    WindowMiss,
)
from hermitian import (
    DEFAULT_TOL,
    ProjPoint,
    Tolerance,
    inner,
    orthogonal_complement_point,
    projectively_equal,
    sign,
    tance,
)
from isometry import Isometry, compose_all, eigenvalues, eigenvector, inf_norm, reflection
from pentagon import Pentagon
from quadrangle import polar_sequence, vertex_cycle

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# ── Orbifold and Toledo ───────────────────────────────────

def orbifold_euler_char(n: int) -> Fraction:
    """χ of the sphere with n cone points of angle π: 2 − n/2."""
    if n < 5:
        raise BadN(f"need at least 5 cone points, got {n}")
    return Fraction(2) - Fraction(n, 2)


@dataclass(frozen=True)
class ToledoResult:
    raw_mod2: float
    tau: Fraction
    chi: Fraction
    vertex_products: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def ratio(self) -> Fraction:
        return self.tau / self.chi


def _window(value: float) -> float:
    """Representative of value mod 2 in (−1, 1]."""
    return 1.0 - ((1.0 - value) % 2.0)


def toledo(pent: Pentagon, x1: Optional[ProjPoint] = None, n: int = 5,
           tol: Tolerance = DEFAULT_TOL) -> ToledoResult:
    """
    τ = [arg⟨x₃,x₂⟩⟨x₂,x₁⟩ + arg⟨x₁,x₄⟩⟨x₄,x₃⟩]/π mod 2, snapped to a rational.

    Raises:
        WindowMiss: If the windowed value is not within TOLEDO_SNAP_TOL of a
            rational with denominator ≤ TOLEDO_MAX_DENOMINATOR, or the snapped
            value breaks |τ| ≤ |χ|.
    """
    chi = orbifold_euler_char(n)
    data = polar_sequence(pent, x1, tol)
    x1, x2, x3, x4 = vertex_cycle(data, data.witness)

    raw = (np.angle(inner(x3, x2) * inner(x2, x1)) + np.angle(inner(x1, x4) * inner(x4, x3))) / np.pi
    windowed = _window(float(raw))

    snapped = Fraction(windowed).limit_denominator(TOLEDO_MAX_DENOMINATOR)
    if abs(float(snapped) - windowed) > TOLEDO_SNAP_TOL:
        raise WindowMiss(f"τ ≈ {windowed:.12g} is not near a rational with denominator "
                         f"≤ {TOLEDO_MAX_DENOMINATOR}")
    if abs(snapped) > abs(chi):
        raise WindowMiss(f"τ = {snapped} breaks the Toledo inequality |τ| ≤ {abs(chi)}")

    products = tuple(float(inner(b, a).real) for a, b in ((x1, x2), (x2, x3), (x3, x4)))
    logger.debug("Toledo raw %.15f → %s", windowed, snapped)
    return ToledoResult(raw_mod2=windowed, tau=snapped, chi=chi, vertex_products=products)


def euler_from_toledo(tau: Fraction, chi: Fraction) -> Fraction:
    """e = (3τ − 2χ)/2."""
    return (3 * Fraction(tau) - 2 * Fraction(chi)) / 2


def euler_cross_check(pent: Pentagon, x1: Optional[ProjPoint] = None,
                      tol: Tolerance = DEFAULT_TOL) -> Fraction:
    result = toledo(pent, x1, tol=tol)
    return euler_from_toledo(result.tau, result.chi)


# ── Boundary geometry of complex geodesics ────────────────

def middle_slice_polar(qa: ProjPoint, qb: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> ProjPoint:
    """
    Polar point of the middle slice of the bisector segment B[C_a, C_b].

    Raises:
        NotUltraparallel: If qa, qb are not positive with ta(qa,qb) > 1.
    """
    if sign(qa, tol) != 1 or sign(qb, tol) != 1 or tance(qa, qb, tol) <= 1.0 + tol.eq_tol:
        raise NotUltraparallel("middle slice needs two ultraparallel complex geodesics")
    f = orthogonal_complement_point(qa, qb, tol)
    ca = orthogonal_complement_point(qa, f, tol).unit()
    cb = orthogonal_complement_point(qb, f, tol).unit()
    h = inner(ca, cb)
    cb = cb.scaled(-h / abs(h))
    midpoint = ProjPoint(ca.rep + cb.rep, qa.space)
    return orthogonal_complement_point(midpoint, f, tol).unit()


def triple_product(a: ProjPoint, b: ProjPoint, c: ProjPoint) -> complex:
    """⟨a,b⟩⟨b,c⟩⟨c,a⟩."""
    return inner(a, b) * inner(b, c) * inner(c, a)


def _coincidence(tol: Tolerance) -> Tolerance:
    """`tol` with eq_tol capped at COINCIDENCE_TOL, for telling boundary points apart."""
    return replace(tol, eq_tol=min(tol.eq_tol, COINCIDENCE_TOL))


class CyclicOrder(str, Enum):
    CYCLIC = "Cyclic"
    ANTICYCLIC = "Anticyclic"


def cyclic_order(xi1: ProjPoint, xi2: ProjPoint, xi3: ProjPoint,
                 polar: Optional[ProjPoint] = None,
                 tol: Tolerance = DEFAULT_TOL) -> Tuple[CyclicOrder, float]:
    """
    Orientation of three boundary points of a complex geodesic.

    Cyclic (counterclockwise order) iff Im⟨ξ₁,ξ₂⟩⟨ξ₂,ξ₃⟩⟨ξ₃,ξ₁⟩ < 0. Returns
    the order with that imaginary part.

    Raises:
        NotOnBoundary: If a point is not isotropic or not orthogonal to `polar`.
        DegenerateSpan: If two of the points coincide.
        RealPartNonzero: If the triple product is not purely imaginary.
    """
    points = (xi1, xi2, xi3)
    for k, xi in enumerate(points, start=1):
        if sign(xi, tol) != 0:
            raise NotOnBoundary(f"ξ{k} is not isotropic")
        if polar is not None and abs(inner(xi.normalized(), polar.normalized())) > tol.eq_tol:
            raise NotOnBoundary(f"ξ{k} is not on the boundary of the given complex geodesic")
    distinct = _coincidence(tol)
    for a, b in ((0, 1), (1, 2), (0, 2)):
        if projectively_equal(points[a], points[b], distinct):
            raise DegenerateSpan(f"ξ{a + 1} and ξ{b + 1} coincide")

    value = triple_product(*points)
    scale = np.prod([xi.space.form_norm(xi.rep) ** 2 for xi in points])
    if abs(value.real) > tol.eq_tol * scale:
        raise RealPartNonzero(f"triple product {value:.6g} has a real part")
    order = CyclicOrder.CYCLIC if value.imag < 0 else CyclicOrder.ANTICYCLIC
    return order, float(value.imag)


def direction_test(isometry: Isometry, z: ProjPoint) -> complex:
    """⟨z,Iz⟩⟨Iz,I²z⟩⟨I²z,z⟩; positive imaginary part means clockwise motion."""
    iz = isometry.apply(z)
    return triple_product(z, iz, isometry.apply(iz))


@dataclass(frozen=True)
class SliceFixedPoints:
    """The two boundary fixed points of a hyperbolic isometry preserving a complex geodesic."""

    attracting: ProjPoint
    repelling: ProjPoint
    eigenvalue: complex


def _slice_fixed_points(c_polar: ProjPoint, isometry: Isometry, tol: Tolerance) -> SliceFixedPoints:
    if not projectively_equal(isometry.apply(c_polar), c_polar, tol):
        raise NotInvariant("isometry does not preserve the complex geodesic")

    values = eigenvalues(isometry.mat)
    separation = min(abs(values[i] - values[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
    if separation < tol.eq_tol:
        raise NotHyperbolicOnSlice("eigenvalues do not separate")

    space = c_polar.space
    vectors = [ProjPoint(eigenvector(isometry.mat, lam), space).normalized() for lam in values]
    normal = c_polar.normalized()
    polar_index = max(range(3), key=lambda k: abs(inner(vectors[k], normal)))
    slice_pairs = [(values[k], vectors[k]) for k in range(3) if k != polar_index]
    if any(sign(v, tol) != 0 for _, v in slice_pairs):
        raise NotHyperbolicOnSlice("isometry is elliptic on the complex geodesic")

    (lam_a, z_a), (lam_b, z_b) = sorted(slice_pairs, key=lambda pair: abs(pair[0]))
    return SliceFixedPoints(attracting=z_a, repelling=z_b, eigenvalue=lam_a)


def holonomy_boundary_fixed_point(c_polar: ProjPoint, isometry: Isometry,
                                  tol: Tolerance = DEFAULT_TOL) -> Tuple[ProjPoint, complex]:
    """
    The isotropic fixed point on ∂C of an isometry that is hyperbolic on C,
    taken as the eigenvector of smallest-modulus eigenvalue.

    Raises:
        NotInvariant: If the isometry does not preserve C.
        NotHyperbolicOnSlice: If the isometry is not hyperbolic on C.
    """
    fixed = _slice_fixed_points(c_polar, isometry, tol)
    z = fixed.attracting
    residual = inf_norm(isometry.mat @ z.rep - fixed.eigenvalue * z.rep)
    if residual > 1e-8:
        raise NotHyperbolicOnSlice(f"fixed-point residual {residual:.3e}")
    return z, fixed.eigenvalue


def rescale_to(z: ProjPoint, reference: ProjPoint) -> ProjPoint:
    """The multiple λ·z closest to `reference`, λ = z̄ᵀr / z̄ᵀz."""
    lam = np.vdot(z.rep, reference.rep) / np.vdot(z.rep, z.rep)
    return z.scaled(lam)


def boundary_samples(z: ProjPoint, w: ProjPoint) -> Tuple[ProjPoint, ProjPoint]:
    """One point on each arc of ∂C between the boundary points z and w."""
    h = inner(z, w)
    phase = 1j * h / abs(h)
    return (ProjPoint(z.rep + phase * w.rep, z.space),
            ProjPoint(z.rep - phase * w.rep, z.space))


def meridional_endpoint(qa: ProjPoint, qb: ProjPoint, slice_polar: ProjPoint, xi: ProjPoint,
                        tol: Tolerance = DEFAULT_TOL) -> ProjPoint:
    """
    Endpoint on ∂(target slice) of the meridional curve of B[C_a, C_b] through ξ.

    ξ splits as x + b·f with f the polar of the complex spine and x on the
    spine; the endpoint keeps the f-component and replaces x by the slice's
    spine point, phased so that it stays on ξ's side of the real spine.

    Raises:
        SideAmbiguous: If the slice's spine point is orthogonal to x.
    """
    space = qa.space
    f = orthogonal_complement_point(qa, qb, tol).unit()
    b = inner(xi, f)
    x = xi.rep - b * f.rep
    alpha_sq = -space.inner(x, x).real
    tight = _coincidence(tol).eq_tol
    if alpha_sq <= tight * space.form_norm(xi.rep) ** 2:
        # ξ is a vertex of the real spine
        return xi
    alpha = float(np.sqrt(alpha_sq))
    x_hat = ProjPoint(x / alpha, space)

    centre = orthogonal_complement_point(slice_polar, f, tol).unit()
    h = inner(centre, x_hat)
    if abs(h) < tight:
        raise SideAmbiguous("slice centre is orthogonal to the spine component of ξ")
    centre = centre.scaled(-np.conj(h) / abs(h))
    return ProjPoint(centre.rep + (b / alpha) * f.rep, space)


# ── Euler number ──────────────────────────────────────────

@dataclass
class EulerCertificate:
    m: Optional[ProjPoint] = None
    ms: List[ProjPoint] = field(default_factory=list)
    z1: Optional[ProjPoint] = None
    eigenvalue: complex = complex("nan")
    direction_tests: Dict[str, float] = field(default_factory=dict)
    gates: Dict[str, bool] = field(default_factory=dict)
    segment_signs: List[Fraction] = field(default_factory=list)
    e: Optional[Fraction] = None

    def failed_gates(self) -> List[str]:
        return [name for name, ok in self.gates.items() if not ok]


# Segment of the boundary section → (gate certifying its direction, contribution)
SEGMENT_PATTERN = (
    ("M1", "holonomy_123_clockwise", -HALF),
    ("M2", "s3_counterclockwise", HALF),
    ("M3", "holonomy_134_clockwise", -HALF),
    ("M4", "t3_not_cyclic", HALF),
)


def euler_number(pent: Pentagon, boundary_points: Optional[Dict[str, ProjPoint]] = None,
                 z1_reference: Optional[ProjPoint] = None,
                 tol: Tolerance = DEFAULT_TOL) -> EulerCertificate:
    """
    Certify the Euler number of the disc orbibundle.

    `boundary_points` are extra points of ∂C₁ at which both slice holonomies
    are direction-tested and recorded. Direction-test values scale with the
    representative; when `z1_reference` is given, z₁ is rescaled to it
    before any test at z₁ or t₅.

    Raises:
        PatternMismatch: If any gate fails; the certificate is attached.
    """
    data = polar_sequence(pent, tol=tol)
    q1, q2, q3, q4 = data.qs
    r = {i: data.reflection(i) for i in range(2, 6)}
    cert = EulerCertificate()

    # middle slices
    cert.m = middle_slice_polar(q1, q3, tol)
    cert.ms = [middle_slice_polar(data.q(i), data.q(i + 1), tol) for i in range(1, 5)]
    rm = reflection(cert.m)
    rms = [reflection(m) for m in cert.ms]

    # the two holonomies on C₁ and their common fixed point
    first = compose_all([rm, r[3], r[2]])
    second = compose_all([r[5], r[4], rm])
    fixed = _slice_fixed_points(q1, first, tol)
    cert.z1, cert.eigenvalue = holonomy_boundary_fixed_point(q1, first, tol)
    if z1_reference is not None:
        if projectively_equal(z1_reference, cert.z1, tol):
            cert.z1 = rescale_to(cert.z1, z1_reference)
        else:
            logger.warning("Reference z1 is not the fixed point of the first holonomy; "
                           "keeping the computed representative")
    z1 = cert.z1

    plus, minus = boundary_samples(fixed.attracting, fixed.repelling)
    samples = {"w+": plus, "w-": minus}
    samples.update(boundary_points or {})
    for name, z in samples.items():
        cert.direction_tests[f"first@{name}"] = direction_test(first, z).imag
        cert.direction_tests[f"second@{name}"] = direction_test(second, z).imag
    cert.gates["first_hyperbolic"] = (
        cert.direction_tests["first@w+"] * cert.direction_tests["first@w-"] < 0)
    cert.gates["second_hyperbolic"] = (
        cert.direction_tests["second@w+"] * cert.direction_tests["second@w-"] < 0)
    cert.gates["opposite_directions"] = (
        cert.direction_tests["first@w+"] * cert.direction_tests["second@w+"] < 0)

    # section over the quadrangle
    z = {1: z1}
    z[2] = meridional_endpoint(q1, q2, cert.ms[0], z[1], tol)
    z[3] = r[2].apply(z[2])
    z[4] = r[2].apply(z[1])
    z[5] = meridional_endpoint(q2, q3, cert.ms[1], z[4], tol)
    z[6] = r[3].apply(z[5])
    z[7] = r[3].apply(z[4])
    z[8] = meridional_endpoint(q3, q4, cert.ms[2], z[7], tol)
    z[9] = r[4].apply(z[8])
    z[10] = r[4].apply(z[7])
    cert.gates["section_closes"] = projectively_equal(r[5].apply(z[10]), z1, tol)

    # triangle holonomies
    holonomy_123 = compose_all([rm, rms[1], rms[0]])
    holonomy_134 = compose_all([rms[3], rms[2], rm])
    t5 = holonomy_134.apply(z1)
    cert.direction_tests["holonomy_123@z1"] = direction_test(holonomy_123, z1).imag
    cert.direction_tests["holonomy_134@t5"] = direction_test(holonomy_134, t5).imag
    cert.gates["holonomy_123_clockwise"] = cert.direction_tests["holonomy_123@z1"] > 0
    cert.gates["holonomy_134_clockwise"] = cert.direction_tests["holonomy_134@t5"] > 0

    # placement of s₃ on ∂M₂ and t₃ on ∂M₃
    s2 = rms[0].apply(z1)
    s3 = meridional_endpoint(q2, q3, cert.ms[1], s2, tol)
    order, value = cyclic_order(z[5], s3, z[6], tol=tol)
    cert.direction_tests["s3_placement"] = value
    cert.gates["s3_counterclockwise"] = order == CyclicOrder.CYCLIC

    t2 = rm.apply(z1)
    t3 = meridional_endpoint(q3, q4, cert.ms[2], t2, tol)
    if projectively_equal(t3, z[8], _coincidence(tol)):
        cert.direction_tests["t3_placement"] = 0.0
        cert.gates["t3_not_cyclic"] = True
    else:
        order, value = cyclic_order(t3, z[8], z[9], tol=tol)
        cert.direction_tests["t3_placement"] = value
        cert.gates["t3_not_cyclic"] = order == CyclicOrder.ANTICYCLIC

    failed = cert.failed_gates()
    if failed:
        logger.warning("Euler certificate gates failed: %s", ", ".join(failed))
        raise PatternMismatch(f"direction pattern not confirmed: {', '.join(failed)}", cert)

    cert.segment_signs = [contribution for _, _, contribution in SEGMENT_PATTERN]
    cert.e = -sum(cert.segment_signs, Fraction(0))
    logger.info("Euler number %s certified by %d gates", cert.e, len(cert.gates))
    return cert
