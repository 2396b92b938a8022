"""
Hermitian linear algebra on C³ for a form of signature (−,+,+).

The form is ⟨x,y⟩ = xᵀ·G·ȳ for a Gram matrix G. Points of the projective
plane are nonzero vectors up to scale; the ball of negative points is the
complex hyperbolic plane.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from config import EQ_TOL, ISO_TOL, RESIDUAL_TOL
from errors import DegenerateSpan, IsotropicArgument, NotPolarPoints, SignatureError

logger = logging.getLogger(__name__)


# ── Tolerances ────────────────────────────────────────────

@dataclass(frozen=True)
class Tolerance:
    """Thresholds threaded explicitly through every operation."""

    eq_tol: float = EQ_TOL
    residual_tol: float = RESIDUAL_TOL
    iso_tol: float = ISO_TOL

    def __post_init__(self) -> None:
        for name in ("eq_tol", "residual_tol", "iso_tol"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"Tolerance {name} must be strictly positive (got {value})")


DEFAULT_TOL = Tolerance()


# ── Spaces and points ─────────────────────────────────────

@dataclass(frozen=True, eq=False)
class HermitianSpace:
    """
    C³ with the Hermitian form defined by `gram`.

    Raises SignatureError if gram is not Hermitian (exactly, as stored)
    or its eigenvalue signature is not (−,+,+).
    """

    gram: np.ndarray
    name: str = "G"
    _frame: np.ndarray = field(init=False, repr=False)
    _basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        gram = np.array(self.gram, dtype=complex)
        if gram.shape != (3, 3):
            raise SignatureError(f"Gram matrix must be 3×3, got shape {gram.shape}")
        if not np.array_equal(gram, gram.conj().T):
            raise SignatureError("Gram matrix is not Hermitian")

        eigvals, eigvecs = np.linalg.eigh(gram)
        if not (eigvals[0] < 0 < eigvals[1]):
            raise SignatureError(
                f"Gram matrix signature is not (−,+,+): eigenvalues {eigvals.tolist()}"
            )

        scale = np.sqrt(np.abs(eigvals))
        object.__setattr__(self, "gram", gram)
        # coordinates of x̄ in an orthonormalizing basis of the form
        object.__setattr__(self, "_frame", scale[:, None] * eigvecs.conj().T)
        # columns b_k with ⟨b_j,b_k⟩ = diag(−1, 1, 1)
        object.__setattr__(self, "_basis", eigvecs.conj() / scale[None, :])

    @classmethod
    def canonical(cls) -> "HermitianSpace":
        return cls(np.diag([-1.0, 1.0, 1.0]).astype(complex), name="canonical")

    def inner(self, x: np.ndarray, y: np.ndarray) -> complex:
        return complex(np.asarray(x) @ self.gram @ np.asarray(y).conj())

    def form_norm(self, x: np.ndarray) -> float:
        """Euclidean norm of x in a fixed orthonormalizing basis of the form."""
        return float(np.linalg.norm(self._frame @ np.asarray(x).conj()))

    @property
    def basis(self) -> np.ndarray:
        """Columns e₀, e₁, e₂ with ⟨e₀,e₀⟩ = −1, ⟨e₁,e₁⟩ = ⟨e₂,e₂⟩ = 1, pairwise orthogonal."""
        return self._basis.copy()


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A projective point: a chosen nonzero representative in a HermitianSpace."""

    rep: np.ndarray
    space: HermitianSpace

    def __post_init__(self) -> None:
        rep = np.array(self.rep, dtype=complex).reshape(-1)
        if rep.shape != (3,):
            raise ValueError(f"Point representative must have 3 coordinates, got {rep.shape}")
        if not np.all(np.isfinite(rep)):
            raise ValueError("Point representative has non-finite coordinates")
        if not np.any(rep):
            raise ValueError("The zero vector is not a projective point")
        object.__setattr__(self, "rep", rep)

    @property
    def norm_sq(self) -> float:
        """⟨p,p⟩ for the stored representative."""
        return self.space.inner(self.rep, self.rep).real

    def normalized(self) -> "ProjPoint":
        """Representative rescaled to unit form-norm (see HermitianSpace.form_norm)."""
        return ProjPoint(self.rep / self.space.form_norm(self.rep), self.space)

    def scaled(self, factor: complex) -> "ProjPoint":
        return ProjPoint(self.rep * factor, self.space)

    def unit(self) -> "ProjPoint":
        """Representative with ⟨p,p⟩ = ±1; isotropic points fall back to `normalized`."""
        value = self.norm_sq
        if abs(value) <= ISO_TOL * self.space.form_norm(self.rep) ** 2:
            return self.normalized()
        return ProjPoint(self.rep / np.sqrt(abs(value)), self.space)


# ── Operations ────────────────────────────────────────────

def inner(x, y, space: Optional[HermitianSpace] = None) -> complex:
    """
    ⟨x,y⟩ = xᵀ·G·ȳ.

    Accepts ProjPoints (their representatives are used) or raw vectors
    together with an explicit space.
    """
    if space is None:
        space = x.space if isinstance(x, ProjPoint) else y.space
    xv = x.rep if isinstance(x, ProjPoint) else x
    yv = y.rep if isinstance(y, ProjPoint) else y
    return space.inner(xv, yv)


def normalize(p: ProjPoint) -> ProjPoint:
    """Unit-scaled representative: ⟨p,p⟩ = ±1, or unit form-norm when isotropic."""
    return p.unit()


def sign(p: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> int:
    """−1, 0 or +1 according to ⟨p,p⟩ on the unit form-norm representative."""
    value = p.normalized().norm_sq
    if value < -tol.iso_tol:
        return -1
    if value > tol.iso_tol:
        return 1
    return 0


def _require_nonisotropic(p: ProjPoint, tol: Tolerance) -> None:
    if sign(p, tol) == 0:
        raise IsotropicArgument(f"point {np.round(p.rep, 6).tolist()} is isotropic")


def tance(p: ProjPoint, q: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> float:
    """
    ta(p,q) = ⟨p,q⟩⟨q,p⟩ / (⟨p,p⟩⟨q,q⟩).

    Invariant under rescaling either representative and under isometries.

    Raises:
        IsotropicArgument: If p or q is isotropic.
    """
    _require_nonisotropic(p, tol)
    _require_nonisotropic(q, tol)
    pn, qn = p.normalized(), q.normalized()
    pq = inner(pn, qn)
    return float((pq * pq.conjugate()).real / (pn.norm_sq * qn.norm_sq))


def orthogonal_complement_point(x: ProjPoint, y: ProjPoint,
                                tol: Tolerance = DEFAULT_TOL) -> ProjPoint:
    """
    The point z with ⟨z,x⟩ = ⟨z,y⟩ = 0 (Hermitian cross product).

    When x and y span a projective line, z is its polar point.

    Raises:
        DegenerateSpan: If x and y are projectively equal.
    """
    space = x.space
    a = space.gram @ x.normalized().rep.conj()
    b = space.gram @ y.normalized().rep.conj()
    z = np.cross(a, b)
    if np.linalg.norm(z) <= tol.eq_tol * np.linalg.norm(a) * np.linalg.norm(b):
        raise DegenerateSpan("points are projectively equal; no unique orthogonal point")
    return ProjPoint(z, space).normalized()


def projectively_equal(p: ProjPoint, q: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> bool:
    """
    Representative-free equality.

    Two negative points are equal iff their tance is 1; otherwise compare
    the normalized Euclidean overlap of the representatives.
    """
    if sign(p, tol) == -1 and sign(q, tol) == -1:
        return abs(tance(p, q, tol) - 1.0) < tol.eq_tol
    overlap = abs(np.vdot(p.rep, q.rep)) / (np.linalg.norm(p.rep) * np.linalg.norm(q.rep))
    return bool(overlap > 1.0 - tol.eq_tol)


class LineKind(str, Enum):
    ULTRAPARALLEL = "Ultraparallel"
    ASYMPTOTIC = "Asymptotic"
    CONCURRENT = "Concurrent"


@dataclass(frozen=True)
class LineRelation:
    """Relative position of two complex geodesics; value is a distance or an angle."""

    kind: LineKind
    value: Optional[float] = None


def line_relation(p: ProjPoint, q: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> LineRelation:
    """
    Classify the complex geodesics polar to positive points p and q.

    Returns Ultraparallel(dist = arccosh √ta), Concurrent(angle = arccos √ta)
    or Asymptotic.

    Raises:
        NotPolarPoints: If either point is not positive.
    """
    if sign(p, tol) != 1 or sign(q, tol) != 1:
        raise NotPolarPoints("line_relation expects two positive points")
    ta = tance(p, q, tol)
    if ta > 1.0 + tol.eq_tol:
        return LineRelation(LineKind.ULTRAPARALLEL, float(np.arccosh(np.sqrt(ta))))
    if ta < 1.0 - tol.eq_tol:
        return LineRelation(LineKind.CONCURRENT, float(np.arccos(np.sqrt(max(ta, 0.0)))))
    return LineRelation(LineKind.ASYMPTOTIC)
