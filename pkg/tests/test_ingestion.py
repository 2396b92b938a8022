"""
Tests for data ingestion: fixture loading, pentagon file validation
and inline point parsing.
"""

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np

# Ensure project root is on the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from config import FIXTURE_PATH
from hermitian import HermitianSpace, sign
from ingestion import (
    _validate_pentagon_data,
    load_fixture,
    load_pentagon,
    parse_complex,
    parse_point_text,
    pentagon_from_dict,
)
from pentagon import CubeRoot


# ── Sample data ───────────────────────────────────────────

def _fixture_dict() -> dict:
    with open(FIXTURE_PATH, encoding="utf-8") as f:
        return json.load(f)


# ── load_fixture() tests ─────────────────────────────────

class TestLoadFixture(unittest.TestCase):

    def setUp(self):
        self.fixture = load_fixture()

    def test_pentagon_fields(self):
        pent = self.fixture.pentagon
        self.assertEqual(len(pent.points), 5)
        self.assertEqual(pent.delta, CubeRoot.OMEGA2)
        self.assertEqual(self.fixture.source, FIXTURE_PATH)

    def test_optional_fields(self):
        self.assertAlmostEqual(self.fixture.t45, 1.36)
        self.assertAlmostEqual(self.fixture.coords.s1, -0.615)
        self.assertAlmostEqual(self.fixture.coords.tau, complex(-2.22, -3.845152792802909))
        self.assertEqual(self.fixture.coords.sigma.as_tuple(), (1, -1, -1))
        self.assertEqual(sign(self.fixture.witness), -1)

    def test_reference_points(self):
        for key in ("m", "m1", "m2", "m3", "m4", "z_clockwise", "z_counterclockwise"):
            self.assertIn(key, self.fixture.reference)
        self.assertIsNotNone(self.fixture.reference_eigenvalue)


# ── load_pentagon() error handling ───────────────────────

class TestLoadPentagonErrors(unittest.TestCase):

    def _write(self, tmpdir: str, text: str) -> Path:
        path = Path(tmpdir) / "pentagon.json"
        path.write_text(text, encoding="utf-8")
        return path

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_pentagon("/nonexistent/pentagon.json")

    def test_empty_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with self.assertRaises(ValueError):
                load_pentagon(self._write(tmpdir, "   \n"))

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with self.assertRaises(ValueError) as ctx:
                load_pentagon(self._write(tmpdir, "{not json"))
            self.assertIn("not valid JSON", str(ctx.exception))

    def test_round_trip_through_disk(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            parsed = load_pentagon(self._write(tmpdir, json.dumps(_fixture_dict())))
        np.testing.assert_allclose(parsed.pentagon.points[3].rep,
                                   load_fixture().pentagon.points[3].rep)


# ── Structure validation ─────────────────────────────────

class TestValidation(unittest.TestCase):

    def test_missing_points_key(self):
        data = _fixture_dict()
        del data["points"]
        with self.assertRaises(ValueError):
            _validate_pentagon_data(data)

    def test_missing_single_point(self):
        data = _fixture_dict()
        del data["points"]["p4"]
        with self.assertRaises(ValueError) as ctx:
            pentagon_from_dict(data)
        self.assertIn("p4", str(ctx.exception))

    def test_unsupported_version(self):
        data = _fixture_dict()
        data["version"] = 7
        with self.assertRaises(ValueError):
            pentagon_from_dict(data)

    def test_bad_gram_shape(self):
        data = _fixture_dict()
        data["gram"] = data["gram"][:2]
        with self.assertRaises(ValueError):
            pentagon_from_dict(data)

    def test_bad_delta(self):
        data = _fixture_dict()
        data["delta"] = "omega3"
        with self.assertRaises(ValueError):
            pentagon_from_dict(data)

    def test_definite_gram_rejected(self):
        data = _fixture_dict()
        data["gram"] = [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]]
        with self.assertRaises(ValueError):
            pentagon_from_dict(data)

    def test_non_list_array(self):
        with self.assertRaises(ValueError):
            _validate_pentagon_data(["gram", "points"])

    def test_coords_need_all_keys(self):
        data = _fixture_dict()
        del data["coords"]["tau"]
        with self.assertRaises(ValueError):
            pentagon_from_dict(data)


# ── Scalars and inline points ────────────────────────────

class TestParsing(unittest.TestCase):

    def test_parse_complex(self):
        self.assertEqual(parse_complex(2, "x"), complex(2, 0))
        self.assertEqual(parse_complex([0.5, -1.5], "x"), complex(0.5, -1.5))

    def test_parse_complex_rejects_other_shapes(self):
        for bad in (True, "1+2j", [1, 2, 3], [1, "a"], None):
            with self.assertRaises(ValueError, msg=repr(bad)):
                parse_complex(bad, "x")

    def test_parse_point_text(self):
        space = HermitianSpace.canonical()
        point = parse_point_text("0.62+0.36j, 0, 0.69", space)
        np.testing.assert_allclose(point.rep, [0.62 + 0.36j, 0, 0.69])

    def test_parse_point_text_with_spaces(self):
        point = parse_point_text("1 - 2j , 1j, -3", HermitianSpace.canonical())
        np.testing.assert_allclose(point.rep, [1 - 2j, 1j, -3])

    def test_parse_point_text_errors(self):
        space = HermitianSpace.canonical()
        with self.assertRaises(ValueError):
            parse_point_text("1, 2", space)
        with self.assertRaises(ValueError):
            parse_point_text("1, two, 3", space)
        with self.assertRaises(ValueError):
            parse_point_text("0, 0, 0", space)


if __name__ == "__main__":
    unittest.main()
