"""
Unit tests for surface coordinates of strongly regular triples.
"""

import json
import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Ensure project root is on the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from config import DATA_DIR
from errors import DegenerateTriple, InvalidCoords
from hermitian import HermitianSpace, ProjPoint
from isometry import random_isometry
from triple_variety import (
    RegularTriple,
    SignTriple,
    SurfaceCoords,
    coords_from_triple,
    gram_from_coords,
    inequality_check,
    realize_triple,
    solve_s,
    surface_residual,
    validate_coords,
)


# ── Worked-example coordinates ────────────────────────────

TAU = complex(-2.22, -3.845152792802909)
KAPPA = (TAU - 3.0) / 8.0
S1 = -0.615
S2 = 1.36
SIGMA = SignTriple(1, -1, -1)
ROOTS = [-0.8491361680, -0.8236638320]


def _example_coords(s=None) -> SurfaceCoords:
    s = solve_s(S1, S2, KAPPA)[1] if s is None else s
    return SurfaceCoords(s1=S1, s2=S2, s=s, sigma=SIGMA, tau=TAU)


def _fixture_gram() -> np.ndarray:
    with open(DATA_DIR / "paper_example.json", encoding="utf-8") as f:
        raw = json.load(f)["gram"]
    return np.array([[complex(re, im) for re, im in row] for row in raw])


# ── SignTriple ────────────────────────────────────────────

class TestSignTriple(unittest.TestCase):

    def test_valid(self):
        self.assertEqual(SIGMA.as_tuple(), (1, -1, -1))
        self.assertEqual(SIGMA.product, 1)

    def test_two_positive_signs_rejected(self):
        with self.assertRaises(ValueError):
            SignTriple(1, 1, -1)

    def test_zero_rejected(self):
        with self.assertRaises(ValueError):
            SignTriple(0, -1, -1)


# ── Surface equation ──────────────────────────────────────

class TestSolveS(unittest.TestCase):

    def test_example_roots(self):
        roots = solve_s(S1, S2, KAPPA)
        self.assertEqual(len(roots), 2)
        np.testing.assert_allclose(roots, ROOTS, atol=1e-9)

    def test_roots_are_ascending_and_on_surface(self):
        roots = solve_s(S1, S2, KAPPA)
        self.assertLess(roots[0], roots[1])
        for s in roots:
            self.assertLess(abs(surface_residual(S1, S2, s, KAPPA)), 1e-12)

    def test_negative_discriminant(self):
        self.assertEqual(solve_s(1.0, 1.0, 0.0), [])

    def test_double_root_collapses(self):
        self.assertEqual(solve_s(1.0, 1.0, complex(-0.5, 0.0)), [1.0])

    def test_residual_property(self):
        self.assertLess(abs(_example_coords().residual), 1e-12)


# ── Inequalities and validation ───────────────────────────

class TestValidation(unittest.TestCase):

    def test_example_passes_inequalities(self):
        report = inequality_check(_example_coords())
        self.assertTrue(report.ok)
        self.assertEqual(set(report.slacks), {"s1_sign", "s1_bound", "s2_sign", "s2_bound", "det_sign"})
        self.assertAlmostEqual(report.slacks["det_sign"], 0.305, places=9)

    def test_example_validates(self):
        validate_coords(_example_coords())

    def test_off_surface_rejected(self):
        with self.assertRaises(InvalidCoords):
            validate_coords(_example_coords(s=-0.5))

    def test_inequality_failure_rejected(self):
        coords = SurfaceCoords(s1=-0.615, s2=0.5, s=0.0, sigma=SIGMA, tau=TAU)
        with self.assertRaises(InvalidCoords) as ctx:
            validate_coords(coords)
        self.assertIn("s2_bound", str(ctx.exception))


# ── Realization ───────────────────────────────────────────

class TestRealization(unittest.TestCase):

    def test_gram_matches_fixture(self):
        np.testing.assert_allclose(gram_from_coords(_example_coords()), _fixture_gram(), atol=1e-10)

    def test_realized_triple_has_trace_tau(self):
        space, triple = realize_triple(_example_coords())
        self.assertAlmostEqual(triple.trace, TAU, places=9)
        self.assertIs(triple.space, space)

    def test_coords_round_trip(self):
        coords = _example_coords()
        _, triple = realize_triple(coords)
        back = coords_from_triple(triple)
        self.assertAlmostEqual(back.s1, coords.s1, places=10)
        self.assertAlmostEqual(back.s2, coords.s2, places=10)
        self.assertAlmostEqual(back.s, coords.s, places=10)
        self.assertEqual(back.sigma, SIGMA)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_coords_are_invariant(self, seed):
        space, triple = realize_triple(_example_coords())
        g = random_isometry(space, np.random.default_rng(seed))
        moved = RegularTriple(*(g.apply(p) for p in triple.points))
        before, after = coords_from_triple(triple), coords_from_triple(moved)
        self.assertAlmostEqual(after.s1, before.s1, delta=1e-8)
        self.assertAlmostEqual(after.s2, before.s2, delta=1e-8)
        self.assertAlmostEqual(after.s, before.s, delta=1e-8)
        self.assertAlmostEqual(after.tau, before.tau, delta=1e-8)

    def test_orthogonal_triple_is_degenerate(self):
        space = HermitianSpace.canonical()
        with self.assertRaises(DegenerateTriple):
            RegularTriple(ProjPoint([1, 0, 0], space), ProjPoint([0, 1, 0], space),
                          ProjPoint([0, 0, 1], space))


if __name__ == "__main__":
    unittest.main()
