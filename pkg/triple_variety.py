"""
Surface coordinates for strongly regular triples of reflections.

A triple (p₁,p₂,p₃) of nonisotropic points with signs σ and trace
τ = tr R^{p₃}R^{p₂}R^{p₁} is determined up to PU(2,1) by s₁ = ta(p₁,p₂),
s₂ = ta(p₂,p₃) and s = Re η, subject to the surface equation

    s₁²s₂ + s₁s₂² − 2s₁s₂s + s² + 2Re(κ)s₁s₂ + Im(κ)² = 0,   κ = (τ − 3)/8,

and five strict inequalities.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from errors import DegenerateTriple, InvalidCoords
from hermitian import DEFAULT_TOL, HermitianSpace, ProjPoint, Tolerance, inner, sign, tance
from isometry import compose_all, deltoid_value, reflection

logger = logging.getLogger(__name__)


# ── Types ─────────────────────────────────────────────────

@dataclass(frozen=True)
class SignTriple:
    """Signs of (p₁,p₂,p₃); at most one entry may be +1."""

    s1: int
    s2: int
    s3: int

    def __post_init__(self) -> None:
        values = (self.s1, self.s2, self.s3)
        if any(v not in (-1, 1) for v in values):
            raise ValueError(f"Signs must be ±1, got {values}")
        if sum(1 for v in values if v == 1) > 1:
            raise ValueError(f"At most one sign may be +1, got {values}")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.s1, self.s2, self.s3)

    @property
    def product(self) -> int:
        return self.s1 * self.s2 * self.s3


@dataclass(frozen=True)
class SurfaceCoords:
    s1: float
    s2: float
    s: float
    sigma: SignTriple
    tau: complex

    @property
    def kappa(self) -> complex:
        return (complex(self.tau) - 3.0) / 8.0

    @property
    def residual(self) -> float:
        return surface_residual(self.s1, self.s2, self.s, self.kappa)


@dataclass(frozen=True)
class InequalityReport:
    ok: bool
    slacks: Dict[str, float]


@dataclass(frozen=True, eq=False)
class RegularTriple:
    """Pairwise nonorthogonal points not on a common complex line."""

    p1: ProjPoint
    p2: ProjPoint
    p3: ProjPoint

    def __post_init__(self) -> None:
        points = [p.unit() for p in self.points]
        gram = np.array([[inner(a, b) for b in points] for a in points])
        for i, j in ((0, 1), (1, 2), (0, 2)):
            if abs(gram[i, j]) <= DEFAULT_TOL.eq_tol:
                raise DegenerateTriple(f"p{i + 1} and p{j + 1} are orthogonal")
        det = np.linalg.det(gram).real
        if det >= -DEFAULT_TOL.eq_tol:
            raise DegenerateTriple(f"points lie on a common complex line (det = {det:.3e})")

    @property
    def points(self) -> Tuple[ProjPoint, ProjPoint, ProjPoint]:
        return (self.p1, self.p2, self.p3)

    @property
    def space(self) -> HermitianSpace:
        return self.p1.space

    @property
    def trace(self) -> complex:
        return compose_all([reflection(self.p3), reflection(self.p2), reflection(self.p1)]).trace


# ── Surface equation ──────────────────────────────────────

def surface_residual(s1: float, s2: float, s: float, kappa: complex) -> float:
    kappa = complex(kappa)
    return (s1 * s1 * s2 + s1 * s2 * s2 - 2.0 * s1 * s2 * s + s * s
            + 2.0 * kappa.real * s1 * s2 + kappa.imag ** 2)


def inequality_check(coords: SurfaceCoords) -> InequalityReport:
    """
    Evaluate the five strict inequalities cutting out the surface.

    Each slack is positive exactly when its inequality holds.
    """
    sigma = coords.sigma
    s12 = sigma.s1 * sigma.s2
    s23 = sigma.s2 * sigma.s3
    slacks = {
        "s1_sign": s12 * coords.s1,
        "s1_bound": s12 * coords.s1 - s12,
        "s2_sign": s23 * coords.s2,
        "s2_bound": s23 * coords.s2 - s23,
        "det_sign": -sigma.product * (2.0 * coords.kappa.real + 1.0),
    }
    return InequalityReport(ok=all(v > 0 for v in slacks.values()), slacks=slacks)


def solve_s(s1: float, s2: float, kappa: complex, tol: Tolerance = DEFAULT_TOL) -> List[float]:
    """
    Real roots in s of the surface equation, ascending.

    Returns an empty list when the discriminant is negative and a single
    root when the two coincide within eq_tol.
    """
    kappa = complex(kappa)
    half_b = s1 * s2
    constant = s1 * s1 * s2 + s1 * s2 * s2 + 2.0 * kappa.real * s1 * s2 + kappa.imag ** 2
    disc = half_b * half_b - constant
    if disc < 0:
        return []
    root = np.sqrt(disc)
    if 2.0 * root < tol.eq_tol:
        return [float(half_b)]
    return [float(half_b - root), float(half_b + root)]


def validate_coords(coords: SurfaceCoords, tol: Tolerance = DEFAULT_TOL) -> None:
    """
    Raises:
        InvalidCoords: If τ lies on or inside the deltoid, the surface
            equation fails, or any inequality fails.
    """
    problems: List[str] = []
    if deltoid_value(coords.tau) <= 0:
        problems.append(f"tau {coords.tau} is not outside the deltoid")
    if abs(coords.residual) >= tol.eq_tol:
        problems.append(f"surface residual {coords.residual:.3e} exceeds {tol.eq_tol:g}")
    report = inequality_check(coords)
    problems.extend(f"inequality {name} fails (slack {value:.6g})"
                    for name, value in report.slacks.items() if value <= 0)
    if problems:
        raise InvalidCoords("; ".join(problems))


# ── Realization ───────────────────────────────────────────

def gram_from_coords(coords: SurfaceCoords, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    The Gram matrix of the triple with coordinates `coords`.

    Raises:
        InvalidCoords: If the coordinates are not a point of the surface.
        SignatureError: If the matrix is not of signature (−,+,+).
    """
    validate_coords(coords, tol)
    sigma = coords.sigma
    g12 = np.sqrt(sigma.s1 * sigma.s2 * coords.s1)
    g23 = np.sqrt(sigma.s2 * sigma.s3 * coords.s2)
    g13 = sigma.product * (coords.s - 1j * coords.kappa.imag) / (g12 * g23)
    gram = np.array([
        [sigma.s1, g12, g13],
        [g12, sigma.s2, g23],
        [np.conj(g13), g23, sigma.s3],
    ], dtype=complex)
    HermitianSpace(gram)
    return gram


def realize_triple(coords: SurfaceCoords,
                   tol: Tolerance = DEFAULT_TOL) -> Tuple[HermitianSpace, RegularTriple]:
    """
    Realize coordinates as the standard basis of a space with Gram matrix
    gram_from_coords(coords).
    """
    space = HermitianSpace(gram_from_coords(coords, tol), name="triple")
    basis = np.eye(3, dtype=complex)
    triple = RegularTriple(*(ProjPoint(basis[i], space) for i in range(3)))

    mismatch = abs(triple.trace - complex(coords.tau))
    if mismatch > tol.eq_tol * max(1.0, abs(coords.tau)):
        raise InvalidCoords(f"realized trace misses tau by {mismatch:.3e}")
    logger.debug("Realized triple with trace mismatch %.2e", mismatch)
    return space, triple


def coords_from_triple(triple: RegularTriple, tol: Tolerance = DEFAULT_TOL) -> SurfaceCoords:
    """
    Read (s₁, s₂, s, σ, τ) off a triple; PU(2,1)-invariant.

    Raises:
        DegenerateTriple: If any point is isotropic or the sign pattern is
            not allowed.
    """
    signs = [sign(p, tol) for p in triple.points]
    if 0 in signs:
        raise DegenerateTriple("triple contains an isotropic point")
    try:
        sigma = SignTriple(*signs)
    except ValueError as exc:
        raise DegenerateTriple(str(exc)) from exc

    p1, p2, p3 = triple.points
    eta = (inner(p1, p2) * inner(p2, p3) * inner(p3, p1)
           / (inner(p1, p1).real * inner(p2, p2).real * inner(p3, p3).real))
    return SurfaceCoords(
        s1=tance(p1, p2, tol),
        s2=tance(p2, p3, tol),
        s=float(eta.real),
        sigma=sigma,
        tau=triple.trace,
    )
