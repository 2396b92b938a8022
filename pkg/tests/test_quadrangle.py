"""
Unit tests for the quadrangle conditions Q1–Q4 on the worked example.
"""

import os
import sys
import unittest
from dataclasses import replace

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Ensure project root is on the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from errors import DegenerateSpine, PreconditionQ1, PreconditionQ123
from hermitian import (
    HermitianSpace,
    ProjPoint,
    inner,
    orthogonal_complement_point,
    projectively_equal,
    sign,
)
from ingestion import load_fixture
from isometry import random_isometry
from pentagon import Pentagon, conjugate_pentagon
from quadrangle import (
    bisector_side,
    check_q1,
    check_q2,
    check_q3,
    check_q4,
    default_witness,
    interior_angles,
    polar_sequence,
    q4_brackets,
    quadrangle_report,
    sample_c1,
)


# ── Worked example values ─────────────────────────────────

FIXTURE = load_fixture()
PENT = FIXTURE.pentagon
WITNESS = FIXTURE.witness

EXPECTED_TANCES = {"12": 4.9729, "23": 10.7357, "34": 10.5630, "41": 4.9713, "13": 4.9284, "42": 48.2122}
EXPECTED_TRI123 = [0.3135, 4.6356, 0.2801]
EXPECTED_TRI134 = [0.3208, 4.5468, 0.3530]
EXPECTED_ANGLES = [1.4322, 0.3327, 0.9158, 0.4608]
PHASE = np.exp(-1j * np.pi / 3)


def _mirrored(pent: Pentagon) -> Pentagon:
    """Complex-conjugate image: every form value is conjugated, orientation reverses."""
    space = HermitianSpace(pent.space.gram.conj())
    points = tuple(ProjPoint(p.rep.conj(), space) for p in pent.points)
    return Pentagon(space, points, pent.delta.conjugate())


def _angle_branch(total: float) -> int:
    """±1 for an angle sum of ±π, ±3 for ±3π."""
    for branch in (1, 3, -1, -3):
        if abs(total - branch * np.pi) < 1e-8:
            return branch
    raise AssertionError(f"angle sum {total!r} is not an odd multiple of π up to 3π")


def _bracket_branch(data, x) -> int:
    """The branch the Q4 bracket predicts: π when positive, 3π otherwise, sign by orientation."""
    positive = q4_brackets(data, x)["q4_bracket"] > 0
    if data.eps.imag < 0:
        return 1 if positive else 3
    return -1 if not positive else -3


# ── Polar sequence ────────────────────────────────────────

class TestPolarSequence(unittest.TestCase):

    def setUp(self):
        self.data = polar_sequence(PENT, WITNESS)

    def test_tance_table(self):
        for name, expected in EXPECTED_TANCES.items():
            self.assertAlmostEqual(self.data.tances[name], expected, delta=1e-3, msg=name)

    def test_phases(self):
        self.assertAlmostEqual(self.data.eps, PHASE, delta=1e-4)
        self.assertAlmostEqual(self.data.chi, PHASE, delta=1e-4)

    def test_polar_points_are_positive(self):
        for q in self.data.qs:
            self.assertEqual(sign(q), 1)

    def test_witness_on_first_vertex(self):
        self.assertAlmostEqual(abs(inner(self.data.witness, self.data.q(1))), 0.0, places=9)
        self.assertAlmostEqual(self.data.witness.norm_sq, -1.0, places=10)

    def test_witness_off_c1_rejected(self):
        with self.assertRaises(ValueError):
            polar_sequence(PENT, PENT.point(2))

    def test_boundary_witness_rejected(self):
        centre = self.data.witness
        direction = orthogonal_complement_point(self.data.q(1), centre).unit()
        boundary = ProjPoint(centre.rep + direction.rep, PENT.space)
        self.assertEqual(sign(boundary), 0)
        self.assertAlmostEqual(abs(inner(boundary.normalized(), self.data.q(1))), 0.0, places=9)
        with self.assertRaises(ValueError):
            polar_sequence(PENT, boundary)
        with self.assertRaises(ValueError):
            polar_sequence(PENT, direction)
        self.assertFalse(quadrangle_report(PENT, boundary).q1_ok)

    def test_default_witness(self):
        data = polar_sequence(PENT)
        self.assertEqual(sign(data.witness), -1)
        self.assertAlmostEqual(abs(inner(data.witness, data.q(1))), 0.0, places=9)
        again = default_witness(data.q(1), data.q(4))
        self.assertTrue(projectively_equal(again, data.witness))


# ── Q1–Q4 ────────────────────────────────────────────────

class TestChecks(unittest.TestCase):

    def setUp(self):
        self.data = polar_sequence(PENT, WITNESS)

    def test_q1(self):
        result = check_q1(self.data)
        self.assertTrue(result.ok)
        self.assertAlmostEqual(result.slacks["t12"], np.sqrt(4.9729) - 1.0, delta=1e-3)

    def test_q2_slacks(self):
        result = check_q2(self.data)
        self.assertTrue(result.ok)
        tri123 = [result.slacks[f"tri123_{s}"] for s in "abc"]
        tri134 = [result.slacks[f"tri134_{s}"] for s in "abc"]
        np.testing.assert_allclose(tri123, EXPECTED_TRI123, atol=1e-3)
        np.testing.assert_allclose(tri134, EXPECTED_TRI134, atol=1e-3)
        self.assertAlmostEqual(result.slacks["eps1"], np.sqrt(3) / 2, delta=1e-4)

    def test_q3_slacks(self):
        result = check_q3(self.data)
        self.assertTrue(result.ok)
        gaps = sorted([result.slacks["transv_q3"], result.slacks["transv_q1"]])
        np.testing.assert_allclose(gaps, [0.0544, 0.7800], atol=1e-3)
        sectors = sorted([result.slacks["sector_23"], result.slacks["sector_12"]])
        np.testing.assert_allclose(sectors, [8.006, 11.687], atol=1e-2)

    def test_q4_brackets(self):
        brackets = q4_brackets(self.data)
        self.assertAlmostEqual(brackets["q4_bracket"], 8.0639, delta=1e-3)
        self.assertAlmostEqual(brackets["q4_bracket_r5x"], 6.3637, delta=1e-3)
        self.assertTrue(check_q4(self.data).ok)

    def test_angles(self):
        angles = interior_angles(self.data, self.data.witness)
        np.testing.assert_allclose(angles, EXPECTED_ANGLES, atol=1e-3)
        self.assertAlmostEqual(sum(angles), np.pi, places=9)

    def test_preconditions(self):
        broken = replace(self.data, tances={**self.data.tances, "12": 0.5})
        self.assertFalse(check_q1(broken).ok)
        with self.assertRaises(PreconditionQ1):
            check_q2(broken)
        with self.assertRaises(PreconditionQ1):
            check_q3(broken)
        with self.assertRaises(PreconditionQ123):
            check_q4(broken)

    def test_bisector_side_degenerate(self):
        space = HermitianSpace.canonical()
        x = ProjPoint([1, 0, 0], space)
        with self.assertRaises(DegenerateSpine):
            bisector_side(x, ProjPoint([0, 1, 0], space), ProjPoint([0, 0, 1], space))


# ── Report ────────────────────────────────────────────────

class TestQuadrangleReport(unittest.TestCase):

    def test_example_with_printed_witness(self):
        report = quadrangle_report(PENT, WITNESS)
        self.assertTrue(report.all_ok, report.failure)
        self.assertIsNone(report.failure)
        self.assertAlmostEqual(report.extras["angle_sum"], np.pi, places=9)
        self.assertAlmostEqual(report.extras["q4_bracket_r5x"], 6.3637, delta=1e-3)

    def test_example_with_default_witness(self):
        report = quadrangle_report(PENT)
        self.assertTrue(report.all_ok, report.failure)
        self.assertAlmostEqual(report.slacks["q4_bracket"], 7.29, delta=0.01)

    def test_bad_witness_recorded_not_raised(self):
        report = quadrangle_report(PENT, PENT.point(3))
        self.assertFalse(report.all_ok)
        self.assertFalse(report.q1_ok)
        self.assertTrue(report.failure.startswith("polar_sequence"))

    def test_angle_sum_branch_matches_q4_sign(self):
        data = polar_sequence(PENT, WITNESS)
        for x in sample_c1(data, 100, np.random.default_rng(7)):
            total = sum(interior_angles(data, x))
            self.assertEqual(_angle_branch(total), _bracket_branch(data, x))

    def test_mirrored_quadrangle_flips_branch_and_sign(self):
        data = polar_sequence(_mirrored(PENT))
        for x in sample_c1(data, 100, np.random.default_rng(8)):
            total = sum(interior_angles(data, x))
            self.assertEqual(_angle_branch(total), _bracket_branch(data, x))
            self.assertLess(total, 0)

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_verdict_is_conjugation_invariant(self, seed):
        g = random_isometry(PENT.space, np.random.default_rng(seed))
        moved = conjugate_pentagon(PENT, g)
        report = quadrangle_report(moved)
        self.assertTrue(report.all_ok, report.failure)
        self.assertAlmostEqual(report.tances["42"], EXPECTED_TANCES["42"], delta=1e-3)


if __name__ == "__main__":
    unittest.main()
