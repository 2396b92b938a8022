"""
Exception hierarchy for the geometric operations.

Every failure the library can report is a GeometryError, so callers can
catch the whole family at once and the CLI can map it onto exit codes.
"""


class GeometryError(Exception):
    """Base class for all geometric failures."""


# ── Hermitian core ────────────────────────────────────────

class IsotropicArgument(GeometryError):
    """A point that must be nonisotropic has ⟨p,p⟩ ≈ 0."""


class DegenerateSpan(GeometryError):
    """Two points that must be projectively distinct coincide."""


class NotPolarPoints(GeometryError):
    """A line-relation query received a point that is not positive."""


class SignatureError(GeometryError):
    """A Gram matrix is not Hermitian of signature (−,+,+)."""


# ── Isometries ────────────────────────────────────────────

class FormViolation(GeometryError):
    """A matrix is not in SU(2,1) for the ambient form."""


class NotLoxodromic(GeometryError):
    pass


class EigenFailure(GeometryError):
    """The 3×3 eigenproblem does not separate its eigenvalues."""


# ── Triple variety ────────────────────────────────────────

class InvalidCoords(GeometryError):
    """Surface coordinates violate the surface equation or inequalities."""


class DegenerateTriple(GeometryError):
    pass


# ── Pentagon construction ─────────────────────────────────

class NotHyperbolic(GeometryError):
    """An isometry has no real loxodromic trace above 3."""


class AxisFailure(GeometryError):
    pass


class DeltaOne(GeometryError):
    """The trivial cube root admits no pentagon with this sign list."""


class TraceMismatch(GeometryError):
    pass


class ConditionViolation(GeometryError):
    """A constructed pentagon fails one of (P1–P3)."""


# ── Quadrangle conditions ─────────────────────────────────

class PreconditionQ1(GeometryError):
    pass


class PreconditionQ123(GeometryError):
    pass


class ArgBranch(GeometryError):
    """An argument landed on the branch cut of the principal arg."""


class DegenerateSpine(GeometryError):
    pass


# ── Bending ───────────────────────────────────────────────

class FrameFailure(GeometryError):
    pass


class ResidualBlowup(GeometryError):
    """A bent pentagon no longer satisfies its relation."""


# ── Invariants ────────────────────────────────────────────

class BadN(GeometryError):
    pass


class WindowMiss(GeometryError):
    """No rational of small denominator near the Toledo value."""


class NotUltraparallel(GeometryError):
    pass


class NotOnBoundary(GeometryError):
    pass


class RealPartNonzero(GeometryError):
    pass


class NotInvariant(GeometryError):
    pass


class NotHyperbolicOnSlice(GeometryError):
    pass


class SideAmbiguous(GeometryError):
    pass


class PatternMismatch(GeometryError):
    """
    A direction test of the Euler pipeline disagrees with the pattern.

    The partially filled certificate travels with the exception.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate
