"""
Elements of SU(2,1): reflections, composition, conjugacy classification and
the eigen-structure of loxodromic isometries.

Matrices act on column vectors. Form preservation for ⟨x,y⟩ = xᵀ·G·ȳ reads
Mᵀ·G·M̄ = G, and the form-adjoint of any M is Ḡ⁻¹·Mᴴ·Ḡ.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from errors import EigenFailure, FormViolation, IsotropicArgument, NotLoxodromic
from hermitian import (
    DEFAULT_TOL,
    HermitianSpace,
    ProjPoint,
    Tolerance,
    inner,
    sign,
)

logger = logging.getLogger(__name__)

IDENTITY = np.eye(3, dtype=complex)


# ── Matrix helpers ────────────────────────────────────────

def adjoint(mat: np.ndarray, space: HermitianSpace) -> np.ndarray:
    """The form-adjoint M* with ⟨Mx,y⟩ = ⟨x,M*y⟩; equals M⁻¹ for isometries."""
    gbar = space.gram.conj()
    return np.linalg.solve(gbar, mat.conj().T @ gbar)


def _renormalize(mat: np.ndarray) -> np.ndarray:
    """
    Divide by a cube root of det so det = 1.

    The principal root is used: its argument lies in (−π/3, π/3], so of the
    three cube roots it is the one nearest 1.
    """
    det = complex(np.linalg.det(mat))
    if det == 0:
        return mat
    return mat / det ** (1.0 / 3.0)


def inf_norm(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat)))


# ── Isometry ──────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Isometry:
    """
    A 3×3 matrix preserving the form of `space`, with det 1.

    Raises FormViolation on construction if det or form preservation is off
    by more than tol.eq_tol (relative to the size of the matrix). Products and
    inverses inherit the tolerance.
    """

    mat: np.ndarray
    space: HermitianSpace
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self) -> None:
        mat = np.array(self.mat, dtype=complex)
        if mat.shape != (3, 3):
            raise FormViolation(f"Isometry matrix must be 3×3, got shape {mat.shape}")
        object.__setattr__(self, "mat", mat)

        scale = max(1.0, inf_norm(mat)) ** 2
        det_res = abs(complex(np.linalg.det(mat)) - 1.0)
        form_res = inf_norm(mat.T @ self.space.gram @ mat.conj() - self.space.gram)
        if det_res > self.tol.eq_tol * scale or form_res > self.tol.eq_tol * scale:
            raise FormViolation(
                f"matrix is not in SU(2,1): |det−1| = {det_res:.3e}, "
                f"form residual = {form_res:.3e}"
            )

    @classmethod
    def identity(cls, space: HermitianSpace) -> "Isometry":
        return cls(IDENTITY.copy(), space)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def compose(self, other: "Isometry") -> "Isometry":
        """self ∘ other, renormalized back into SU(2,1)."""
        return Isometry(_renormalize(self.mat @ other.mat), self.space, self.tol)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return self.compose(other)

    def apply(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.mat @ p.rep, p.space)

    def inverse(self) -> "Isometry":
        return Isometry(adjoint(self.mat, self.space), self.space, self.tol)

    def conjugate_by(self, other: "Isometry") -> "Isometry":
        """other · self · other⁻¹."""
        return other.compose(self).compose(other.inverse())


def compose_all(isometries: List[Isometry]) -> Isometry:
    """Product of a list, leftmost acting last: [A, B, C] ↦ A·B·C."""
    if not isometries:
        raise ValueError("compose_all needs at least one isometry")
    result = isometries[0]
    for isometry in isometries[1:]:
        result = result.compose(isometry)
    return result


def reflection(p: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> Isometry:
    """
    R^p : x ↦ 2(⟨x,p⟩/⟨p,p⟩)·p − x.

    An involution fixing p, with trace −1 and det 1.

    Raises:
        IsotropicArgument: If p is isotropic.
    """
    if sign(p, tol) == 0:
        raise IsotropicArgument("cannot reflect in an isotropic point")
    rep = p.rep
    norm_sq = inner(p, p).real
    mat = 2.0 * np.outer(rep, p.space.gram @ rep.conj()) / norm_sq - IDENTITY
    return Isometry(mat, p.space, tol)


# ── Conjugacy classes ─────────────────────────────────────

class IsometryTag(str, Enum):
    REGULAR_ELLIPTIC = "RegularElliptic"
    LOXODROMIC = "Loxodromic"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class IsometryClass:
    tag: IsometryTag
    trace: complex
    deltoid_value: float


def deltoid_value(z: complex) -> float:
    """Goldman's deltoid function f(z) = |z|⁴ − 8·Re(z³) + 18|z|² − 27."""
    z = complex(z)
    mod_sq = abs(z) ** 2
    return float(mod_sq ** 2 - 8.0 * (z ** 3).real + 18.0 * mod_sq - 27.0)


def classify(isometry: Isometry, tol: Tolerance = DEFAULT_TOL) -> IsometryClass:
    """Regular elliptic inside the deltoid, loxodromic outside, Boundary on it."""
    trace = isometry.trace
    value = deltoid_value(trace)
    if value < -tol.eq_tol:
        tag = IsometryTag.REGULAR_ELLIPTIC
    elif value > tol.eq_tol:
        tag = IsometryTag.LOXODROMIC
    else:
        tag = IsometryTag.BOUNDARY
    return IsometryClass(tag=tag, trace=trace, deltoid_value=value)


# ── Eigen-structure ───────────────────────────────────────

def _depressed_cubic_roots(det_m: complex) -> List[complex]:
    """Roots of λ³ − λ − d = 0 by Cardano's formula."""
    # λ = u + 1/(3u) with u³ = d/2 ± √(d²/4 − 1/27)
    disc = np.sqrt(complex(det_m * det_m / 4.0 - 1.0 / 27.0))
    u3 = det_m / 2.0 + disc
    if abs(det_m / 2.0 - disc) > abs(u3):
        u3 = det_m / 2.0 - disc
    u = u3 ** (1.0 / 3.0) if u3 != 0 else 0j
    omega = np.exp(2j * np.pi / 3)
    roots = []
    for k in range(3):
        uk = u * omega ** k
        roots.append(uk + 1.0 / (3.0 * uk) if uk != 0 else 0j)
    return roots


def eigenvalues(mat: np.ndarray) -> List[complex]:
    """
    Eigenvalues of a 3×3 complex matrix in closed form.

    Writes A = μI + θM with tr M = 0 and tr M² = 2, so the eigenvalues of M
    solve λ³ = λ + det M. Each root gets one Newton step on the
    characteristic polynomial of A.
    """
    mu = np.trace(mat) / 3.0
    shifted = mat - mu * IDENTITY
    theta = np.sqrt(np.trace(shifted @ shifted) / 2.0)

    if abs(theta) < 1e-300:
        return [complex(mu)] * 3

    m = shifted / theta
    roots = [mu + theta * lam for lam in _depressed_cubic_roots(complex(np.linalg.det(m)))]

    trace = np.trace(mat)
    coeffs = np.array([1.0, -trace, (trace ** 2 - np.trace(mat @ mat)) / 2.0,
                       -np.linalg.det(mat)], dtype=complex)
    deriv = np.polyder(coeffs)
    polished = []
    for root in roots:
        slope = np.polyval(deriv, root)
        if slope != 0:
            root = root - np.polyval(coeffs, root) / slope
        polished.append(complex(root))
    return polished


def eigenvector(mat: np.ndarray, eigenvalue: complex) -> np.ndarray:
    """Null vector of A − λI from the best-conditioned row cross product."""
    shifted = mat - eigenvalue * IDENTITY
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        candidate = np.cross(shifted[i], shifted[j])
        if best is None or np.linalg.norm(candidate) > np.linalg.norm(best):
            best = candidate
    vec = best / np.linalg.norm(best)

    # one step of shifted inverse iteration
    shift = eigenvalue + 1e-10 * max(1.0, abs(eigenvalue))
    try:
        refined = np.linalg.solve(mat - shift * IDENTITY, vec)
        vec = refined / np.linalg.norm(refined)
    except np.linalg.LinAlgError:
        pass
    return vec


@dataclass(frozen=True)
class LoxodromicFrame:
    """
    Fixed points of a loxodromic isometry.

    v1, v2 are isotropic with ⟨v1,v2⟩ = 1 and v1 carries the eigenvalue of
    largest modulus; c is positive with ⟨c,c⟩ = 1.
    """

    v1: ProjPoint
    v2: ProjPoint
    c: ProjPoint
    eigenvalues: Tuple[complex, complex, complex]

    @property
    def basis_change(self) -> np.ndarray:
        """Columns c, v1, v2."""
        return np.column_stack([self.c.rep, self.v1.rep, self.v2.rep])


def loxodromic_frame(isometry: Isometry, tol: Tolerance = DEFAULT_TOL) -> LoxodromicFrame:
    """
    Eigen-decomposition of a loxodromic isometry into (v1, v2, c).

    Raises:
        NotLoxodromic: If the isometry is not loxodromic.
        EigenFailure: If the eigenvalues do not separate or the eigenvectors
            do not have the expected signs.
    """
    if classify(isometry, tol).tag != IsometryTag.LOXODROMIC:
        raise NotLoxodromic(f"trace {isometry.trace:.6g} is not loxodromic")

    space = isometry.space
    values = sorted(eigenvalues(isometry.mat), key=abs)
    separation = min(abs(values[i] - values[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
    if separation < tol.eq_tol:
        raise EigenFailure(f"eigenvalues separate by only {separation:.3e}")

    lam2, lam_c, lam1 = values
    v1 = ProjPoint(eigenvector(isometry.mat, lam1), space).normalized()
    v2 = ProjPoint(eigenvector(isometry.mat, lam2), space).normalized()
    c = ProjPoint(eigenvector(isometry.mat, lam_c), space)

    if sign(v1, tol) != 0 or sign(v2, tol) != 0 or sign(c, tol) != 1:
        raise EigenFailure("loxodromic eigenvectors do not have signs (0, 0, +)")

    h = inner(v1, v2)
    if abs(h) < tol.eq_tol:
        raise EigenFailure("isotropic fixed points are orthogonal")
    v2 = v2.scaled(1.0 / h.conjugate())
    c = c.unit()

    logger.debug("Loxodromic frame: eigenvalues %s", [f"{v:.6g}" for v in (lam1, lam2, lam_c)])
    return LoxodromicFrame(v1=v1, v2=v2, c=c, eigenvalues=(lam1, lam2, lam_c))


# ── Derivatives and random elements ───────────────────────

def tangent_maps(p: ProjPoint, t_dir: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    The tangent map t = ⟨·,p⟩/⟨p,p⟩·t_dir and its form-adjoint t*.

    t_dir is projected onto p^⊥ first, so t maps p into p^⊥ and kills p^⊥.
    """
    space = p.space
    rep = p.rep
    norm_sq = inner(p, p).real
    t_vec = np.asarray(t_dir, dtype=complex)
    t_vec = t_vec - space.inner(t_vec, rep) / norm_sq * rep
    tangent = np.outer(t_vec, space.gram @ rep.conj()) / norm_sq
    tangent_adj = np.outer(rep, space.gram @ t_vec.conj()) / norm_sq
    return tangent, tangent_adj


def reflection_derivative_residual(p: ProjPoint, t_dir: np.ndarray, h: float,
                                   tol: Tolerance = DEFAULT_TOL) -> float:
    """
    ‖(R^{p+ht} − R^{p−ht})/(2h) − 2(t + t*)‖∞ for the tangent map t = ⟨·,p⟩/⟨p,p⟩·t_dir.

    t_dir is projected onto p^⊥ first. The residual is O(h²).

    Raises:
        IsotropicArgument: If p is isotropic.
    """
    if sign(p, tol) == 0:
        raise IsotropicArgument("derivative of a reflection needs a nonisotropic center")
    space = p.space
    rep = p.rep
    norm_sq = inner(p, p).real
    t_vec = np.asarray(t_dir, dtype=complex)
    t_vec = t_vec - space.inner(t_vec, rep) / norm_sq * rep

    if not np.any(t_vec):
        return 0.0

    tangent, tangent_adj = tangent_maps(p, t_vec)
    forward = reflection(ProjPoint(rep + h * t_vec, space), tol).mat
    backward = reflection(ProjPoint(rep - h * t_vec, space), tol).mat
    difference = (forward - backward) / (2.0 * h)
    return inf_norm(difference - 2.0 * (tangent + tangent_adj))


def random_negative_point(space: HermitianSpace, rng: np.random.Generator,
                          radius: float = 0.6) -> ProjPoint:
    """A negative point e₀ + a·e₁ + b·e₂ with |a|² + |b|² ≤ radius²."""
    basis = space.basis
    coeffs = rng.normal(size=2) + 1j * rng.normal(size=2)
    coeffs *= radius * rng.uniform() / max(np.linalg.norm(coeffs), 1e-12)
    return ProjPoint(basis[:, 0] + coeffs[0] * basis[:, 1] + coeffs[1] * basis[:, 2], space)


def random_isometry(space: HermitianSpace, rng: Optional[np.random.Generator] = None,
                    n_reflections: int = 4) -> Isometry:
    """Product of reflections in random negative points near the base point."""
    rng = rng or np.random.default_rng()
    factors = [reflection(random_negative_point(space, rng)) for _ in range(n_reflections)]
    return compose_all(factors)
