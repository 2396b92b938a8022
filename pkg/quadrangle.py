"""
Tessellation conditions Q1–Q4 for the quadrangle of bisectors of a pentagon.

The vertices are the complex geodesics C_i polar to q₁ = p₁, q₂ = R₂q₁,
q₃ = R₃q₂, q₄ = R₄q₃. Every inequality is exposed as a named slack that is
positive exactly when the inequality holds.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import (
    ArgBranch,
    DegenerateSpine,
    DegenerateSpan,
    GeometryError,
    PreconditionQ1,
    PreconditionQ123,
)
from hermitian import (
    DEFAULT_TOL,
    ProjPoint,
    Tolerance,
    inner,
    orthogonal_complement_point,
    sign,
    tance,
)
from isometry import Isometry, reflection
from pentagon import Pentagon

logger = logging.getLogger(__name__)

# Pairs in the order the tance table is usually quoted.
TANCE_PAIRS = (("12", 1, 2), ("23", 2, 3), ("34", 3, 4), ("41", 4, 1), ("13", 1, 3), ("42", 4, 2))


# ── Data ──────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class QuadrangleData:
    pentagon: Pentagon
    qs: Tuple[ProjPoint, ProjPoint, ProjPoint, ProjPoint]
    witness: ProjPoint
    tances: Dict[str, float]
    eps: complex
    chi: complex

    def q(self, i: int) -> ProjPoint:
        return self.qs[(i - 1) % 4]

    def reflection(self, i: int) -> Isometry:
        """R_i = R^{p_i}."""
        return reflection(self.pentagon.point(i))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    slacks: Dict[str, float]


@dataclass
class QuadrangleReport:
    """
    Outcome of the four checks; q*_ok is None when a check was not evaluated
    because an earlier one failed.
    """

    q1_ok: Optional[bool] = None
    q2_ok: Optional[bool] = None
    q3_ok: Optional[bool] = None
    q4_ok: Optional[bool] = None
    slacks: Dict[str, float] = field(default_factory=dict)
    tances: Dict[str, float] = field(default_factory=dict)
    angles: List[float] = field(default_factory=list)
    extras: Dict[str, float] = field(default_factory=dict)
    failure: Optional[str] = None

    @property
    def all_ok(self) -> bool:
        return bool(self.q1_ok and self.q2_ok and self.q3_ok and self.q4_ok)


# ── Helpers ───────────────────────────────────────────────

def _arg(z: complex, tol: Tolerance) -> float:
    """Principal argument on ℂ ∖ ℝ≤0."""
    if z == 0 or (z.real < 0 and abs(z.imag) <= tol.eq_tol * abs(z)):
        raise ArgBranch(f"argument of {z:.6g} lies on the branch cut")
    return float(np.angle(z))


def _first_failing(slacks: Dict[str, float]) -> Optional[str]:
    for name, value in slacks.items():
        if not value > 0:
            return name
    return None


# ── Sequence of polar points ──────────────────────────────

def default_witness(q1: ProjPoint, q4: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> ProjPoint:
    """
    The point of C₁ on the real spine of B[C₄,C₁], scaled to ⟨x,x⟩ = −1.

    Raises:
        DegenerateSpine: If C₁ and C₄ do not span a hyperbolic spine.
    """
    try:
        f = orthogonal_complement_point(q4, q1, tol)
        x = orthogonal_complement_point(q1, f, tol)
    except DegenerateSpan as exc:
        raise DegenerateSpine(str(exc)) from exc
    if sign(x, tol) != -1:
        raise DegenerateSpine("C₁ does not meet the complex spine of B[C₄,C₁] inside the ball")
    return x.unit()


def polar_sequence(pent: Pentagon, witness: Optional[ProjPoint] = None,
                   tol: Tolerance = DEFAULT_TOL) -> QuadrangleData:
    """
    Polar points q₁…q₄, the tance table, ε and χ, and a witness point on C₁.

    Raises:
        ValueError: If a supplied witness is not a negative point of C₁.
    """
    q1 = pent.point(1).unit()
    q2 = reflection(pent.point(2)).apply(q1)
    q3 = reflection(pent.point(3)).apply(q2)
    q4 = reflection(pent.point(4)).apply(q3)
    qs = (q1, q2, q3, q4)

    if witness is None:
        witness = default_witness(q1, q4, tol)
    else:
        witness = witness if witness.space is pent.space else ProjPoint(witness.rep, pent.space)
        overlap = abs(inner(witness.normalized(), q1))
        if overlap > tol.eq_tol:
            raise ValueError(f"witness is not a point of C₁ (|⟨x,q₁⟩| = {overlap:.3e})")
        if sign(witness, tol) != -1:
            raise ValueError("witness is not a negative point")
        witness = witness.unit()

    tances = {name: tance(qs[i - 1], qs[j - 1], tol) for name, i, j in TANCE_PAIRS}

    def triple_phase(a: ProjPoint, b: ProjPoint, c: ProjPoint) -> complex:
        eta = (inner(a, b) * inner(b, c) * inner(c, a)
               / (inner(a, a).real * inner(b, b).real * inner(c, c).real))
        return eta / abs(eta) if eta != 0 else complex("nan")

    return QuadrangleData(
        pentagon=pent,
        qs=qs,
        witness=witness,
        tances=tances,
        eps=triple_phase(q1, q2, q3),
        chi=triple_phase(q1, q3, q4),
    )


# ── Q1: ultraparallel vertices ────────────────────────────

def check_q1(data: QuadrangleData) -> CheckResult:
    """√ta(q_i,q_j) − 1 for all six pairs."""
    slacks = {f"t{name}": float(np.sqrt(max(value, 0.0)) - 1.0)
              for name, value in data.tances.items()}
    return CheckResult(ok=all(v > 0 for v in slacks.values()), slacks=slacks)


# ── Q2: transversal counterclockwise triangles ────────────

def _triangle_slacks(t_ab: float, t_bc: float, t_ca: float, phase0: float) -> List[float]:
    base = 1.0 + 2.0 * t_ab * t_bc * t_ca * phase0
    squares = (t_ab ** 2, t_bc ** 2, t_ca ** 2)
    slacks = []
    for k in range(3):
        weighted = [s * (phase0 ** 2 if i == k else 1.0) for i, s in enumerate(squares)]
        slacks.append(base - sum(weighted))
    return slacks


def check_q2(data: QuadrangleData) -> CheckResult:
    """
    Transversality and orientation of △(C₁,C₂,C₃) and △(C₁,C₃,C₄).

    Raises:
        PreconditionQ1: If Q1 fails.
    """
    if not check_q1(data).ok:
        raise PreconditionQ1("Q2 needs ultraparallel vertices")
    t = {name: float(np.sqrt(value)) for name, value in data.tances.items()}
    slacks = {"eps1": -data.eps.imag}
    for suffix, value in zip("abc", _triangle_slacks(t["12"], t["23"], t["13"], data.eps.real)):
        slacks[f"tri123_{suffix}"] = value
    slacks["chi1"] = -data.chi.imag
    for suffix, value in zip("abc", _triangle_slacks(t["13"], t["34"], t["41"], data.chi.real)):
        slacks[f"tri134_{suffix}"] = value
    return CheckResult(ok=all(v > 0 for v in slacks.values()), slacks=slacks)


# ── Q3: transversal adjacency ─────────────────────────────

def bisector_side(x: ProjPoint, a: ProjPoint, b: ProjPoint, tol: Tolerance = DEFAULT_TOL) -> float:
    """
    Im(⟨a,x⟩⟨x,b⟩/⟨a,b⟩): zero on the bisector of (a,b), negative on the side
    its normal field points to.

    Raises:
        DegenerateSpine: If ⟨a,b⟩ vanishes.
    """
    ab = inner(a, b)
    if abs(ab) <= tol.eq_tol * a.space.form_norm(a.rep) * a.space.form_norm(b.rep):
        raise DegenerateSpine("spine points are orthogonal")
    return float((inner(a, x) * inner(x, b) / ab).imag)


def _cotranchal_gap(a: ProjPoint, c: ProjPoint, b: ProjPoint, tol: Tolerance) -> float:
    """|Re(⟨a,b⟩⟨c,c⟩/(⟨a,c⟩⟨c,b⟩)) − 1| − √(1 − 1/ta(c,a))·√(1 − 1/ta(c,b))."""
    ratio = inner(a, b) * inner(c, c) / (inner(a, c) * inner(c, b))
    bound = np.sqrt(1.0 - 1.0 / tance(c, a, tol)) * np.sqrt(1.0 - 1.0 / tance(c, b, tol))
    return float(abs(ratio.real - 1.0) - bound)


def check_q3(data: QuadrangleData, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """
    Transversality of the bisectors meeting at C₃ and at C₁, and membership of
    R₅x in the sector at C₂.

    Raises:
        PreconditionQ1: If Q1 fails.
    """
    if not check_q1(data).ok:
        raise PreconditionQ1("Q3 needs ultraparallel vertices")
    q1, q2, q3, q4 = data.qs
    r5x = data.reflection(5).apply(data.witness)
    slacks = {
        "transv_q3": -_cotranchal_gap(q4, q3, q2, tol),
        "transv_q1": -_cotranchal_gap(q4, q1, q2, tol),
        "sector_23": bisector_side(r5x, q2, q3, tol),
        "sector_12": bisector_side(r5x, q1, q2, tol),
    }
    return CheckResult(ok=all(v > 0 for v in slacks.values()), slacks=slacks)


# ── Q4: angle sum ─────────────────────────────────────────

def vertex_cycle(data: QuadrangleData, x1: ProjPoint) -> Tuple[ProjPoint, ProjPoint, ProjPoint, ProjPoint]:
    """x₁ and its images x₂ = R₂x₁, x₃ = R₃x₂, x₄ = R₄x₃."""
    x2 = data.reflection(2).apply(x1)
    x3 = data.reflection(3).apply(x2)
    x4 = data.reflection(4).apply(x3)
    return x1, x2, x3, x4


def q4_brackets(data: QuadrangleData, x1: Optional[ProjPoint] = None) -> Dict[str, float]:
    """Im⟨x₁,q₂⟩⟨q₃,x₄⟩ and the same bracket with R₅x₁ in place of x₄."""
    if x1 is None:
        x1 = data.witness
    _, _, _, x4 = vertex_cycle(data, x1)
    q2, q3 = data.q(2), data.q(3)
    r5x = data.reflection(5).apply(x1)
    return {
        "q4_bracket": float((inner(x1, q2) * inner(q3, x4)).imag),
        "q4_bracket_r5x": float((inner(x1, q2) * inner(q3, r5x)).imag),
    }


def check_q4(data: QuadrangleData, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """
    Raises:
        PreconditionQ123: If any of Q1–Q3 fails.
    """
    try:
        ready = check_q1(data).ok and check_q2(data).ok and check_q3(data, tol).ok
    except (PreconditionQ1, DegenerateSpine):
        ready = False
    if not ready:
        raise PreconditionQ123("Q4 needs Q1, Q2 and Q3")
    value = q4_brackets(data)["q4_bracket"]
    return CheckResult(ok=value > 0, slacks={"q4_bracket": value})


def interior_angles(data: QuadrangleData, x1: ProjPoint,
                    tol: Tolerance = DEFAULT_TOL) -> Tuple[float, float, float, float]:
    """
    Inner angles θ₁…θ₄ of the quadrangle at x₁ and its images.

    Raises:
        ArgBranch: If an argument falls on the branch cut.
    """
    x = vertex_cycle(data, x1)
    q = data.qs
    angles = []
    for k in range(4):
        prev_q, here_q, next_q = q[(k - 1) % 4], q[k], q[(k + 1) % 4]
        value = (inner(next_q, x[k]) * inner(x[k], prev_q)
                 / (inner(next_q, here_q) * inner(here_q, prev_q)))
        angles.append(_arg(value, tol))
    return tuple(angles)


def sample_c1(data: QuadrangleData, n: int, rng: Optional[np.random.Generator] = None,
              max_radius: float = 0.95) -> List[ProjPoint]:
    """Random points of C₁, each scaled to ⟨x,x⟩ = −1."""
    rng = rng or np.random.default_rng()
    centre = default_witness(data.q(1), data.q(4))
    direction = orthogonal_complement_point(data.q(1), centre).unit()
    samples = []
    for _ in range(n):
        radius = max_radius * np.sqrt(rng.uniform())
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        samples.append(ProjPoint(centre.rep + radius * phase * direction.rep, centre.space).unit())
    return samples


# ── Report ────────────────────────────────────────────────

def quadrangle_report(pent: Pentagon, witness: Optional[ProjPoint] = None,
                      tol: Tolerance = DEFAULT_TOL) -> QuadrangleReport:
    """
    Run Q1–Q4 in order. Failures are recorded in the report, never raised.
    """
    report = QuadrangleReport()
    try:
        data = polar_sequence(pent, witness, tol)
    except (GeometryError, ValueError) as exc:
        report.q1_ok = False
        report.failure = f"polar_sequence: {exc}"
        return report
    report.tances = dict(data.tances)
    report.extras = {"eps0": data.eps.real, "eps1": data.eps.imag,
                     "chi0": data.chi.real, "chi1": data.chi.imag}

    q1 = check_q1(data)
    report.q1_ok = q1.ok
    report.slacks.update(q1.slacks)
    if not q1.ok:
        report.failure = f"Q1:{_first_failing(q1.slacks)}"
        return report

    q2 = check_q2(data)
    report.q2_ok = q2.ok
    report.slacks.update(q2.slacks)

    try:
        q3 = check_q3(data, tol)
    except DegenerateSpine as exc:
        report.q3_ok = False
        report.failure = f"Q3: {exc}"
        return report
    report.q3_ok = q3.ok
    report.slacks.update(q3.slacks)

    if not q2.ok:
        report.failure = f"Q2:{_first_failing(q2.slacks)}"
        return report
    if not q3.ok:
        report.failure = f"Q3:{_first_failing(q3.slacks)}"
        return report

    q4 = check_q4(data, tol)
    report.q4_ok = q4.ok
    report.slacks.update(q4.slacks)
    report.extras["q4_bracket_r5x"] = q4_brackets(data)["q4_bracket_r5x"]
    try:
        report.angles = list(interior_angles(data, data.witness, tol))
        report.extras["angle_sum"] = float(sum(report.angles))
    except ArgBranch as exc:
        logger.warning("Interior angles not computed: %s", exc)
    if not q4.ok:
        report.failure = "Q4:q4_bracket"
    return report
