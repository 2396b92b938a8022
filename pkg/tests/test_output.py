"""
Tests for report serialization and the JSON / CSV writers.
"""

import csv
import json
import os
import sys
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

# Ensure project root is on the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from bending import BendScanRow
from ingestion import load_fixture, pentagon_from_dict
from output import (
    SCAN_FIELDNAMES,
    SLACK_COLUMNS,
    complex_pair,
    fraction_payload,
    number,
    pentagon_payload,
    render_json,
    scan_row_dict,
    write_json,
    write_scan_csv,
)
from quadrangle import QuadrangleReport
from triple_variety import SignTriple, SurfaceCoords


# ── Sample data ───────────────────────────────────────────

FIXTURE = load_fixture()

SAMPLE_COORDS = SurfaceCoords(s1=-0.615, s2=1.36, s=-0.8236638320, sigma=SignTriple(1, -1, -1),
                              tau=complex(-2.22, -3.845152792802909))

PASSING = QuadrangleReport(q1_ok=True, q2_ok=True, q3_ok=True, q4_ok=True,
                           slacks={"t12": 1.23, "q4_bracket": 8.06})
STOPPED_AT_Q2 = QuadrangleReport(q1_ok=True, q2_ok=False, slacks={"t12": 1.1, "eps1": float("nan")},
                                 failure="Q2: tri123_b < 0")

SAMPLE_ROWS = [
    BendScanRow(theta=-0.02, coords=SAMPLE_COORDS, report=STOPPED_AT_Q2),
    BendScanRow(theta=0.0, coords=SAMPLE_COORDS, report=PASSING),
    BendScanRow(theta=0.02, error="DegenerateSpine: spine vanished"),
]


# ── Scalars ───────────────────────────────────────────────

class TestScalars(unittest.TestCase):

    def test_non_finite_becomes_none(self):
        self.assertIsNone(number(float("nan")))
        self.assertIsNone(number(float("inf")))
        self.assertIsNone(number(None))
        self.assertEqual(number(2), 2.0)

    def test_complex_pair(self):
        self.assertEqual(complex_pair(1 - 2j), [1.0, -2.0])

    def test_fraction_payload(self):
        self.assertEqual(fraction_payload(Fraction(-1, 3)), {"exact": "-1/3", "value": -1 / 3})
        self.assertIsNone(fraction_payload(None))

    def test_render_json_rejects_nan(self):
        with self.assertRaises(ValueError):
            render_json({"x": float("nan")})


# ── Scan rows ─────────────────────────────────────────────

class TestScanRowDict(unittest.TestCase):

    def test_passing_row(self):
        row = scan_row_dict(SAMPLE_ROWS[1])
        self.assertEqual(list(row), SCAN_FIELDNAMES)
        self.assertEqual(row["all"], "true")
        self.assertEqual(row["q4"], "true")
        self.assertEqual(row["t12"], 1.23)
        self.assertEqual(row["tri123_a"], "")
        self.assertEqual(row["failure"], "")

    def test_unevaluated_checks_are_empty(self):
        row = scan_row_dict(SAMPLE_ROWS[0])
        self.assertEqual(row["q2"], "false")
        self.assertEqual(row["q3"], "")
        self.assertEqual(row["all"], "false")
        self.assertEqual(row["eps1"], "")
        self.assertEqual(row["failure"], "Q2: tri123_b < 0")

    def test_errored_row(self):
        row = scan_row_dict(SAMPLE_ROWS[2])
        self.assertEqual(row["s1"], "")
        self.assertEqual(row["q1"], "")
        self.assertTrue(row["failure"].startswith("DegenerateSpine"))


# ── Writers ───────────────────────────────────────────────

class TestWriters(unittest.TestCase):

    def test_csv_header_and_rows(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_scan_csv(SAMPLE_ROWS, Path(tmpdir) / "scan.csv")
            with open(path, newline="", encoding="utf-8") as f:
                reader = csv.DictReader(f)
                self.assertEqual(reader.fieldnames, SCAN_FIELDNAMES)
                rows = list(reader)
        self.assertEqual([r["theta"] for r in rows], ["-0.02", "0.0", "0.02"])
        self.assertEqual(len(SCAN_FIELDNAMES), 10 + len(SLACK_COLUMNS))

    def test_csv_is_deterministic(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            first = Path(write_scan_csv(SAMPLE_ROWS, Path(tmpdir) / "a.csv")).read_bytes()
            second = Path(write_scan_csv(SAMPLE_ROWS, Path(tmpdir) / "b.csv")).read_bytes()
        self.assertEqual(first, second)

    def test_default_location(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with patch("output.OUTPUT_DIR", Path(tmpdir)):
                path = write_json({"ok": True}, "report.json")
            self.assertEqual(Path(path), Path(tmpdir) / "report.json")
            with open(path, encoding="utf-8") as f:
                self.assertEqual(json.load(f), {"ok": True})

    def test_creates_parent_directories(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "nested" / "deeper" / "out.json"
            write_json({"ok": True}, "unused.json", target)
            self.assertTrue(target.exists())


# ── Pentagon files ────────────────────────────────────────

class TestPentagonPayload(unittest.TestCase):

    def test_payload_reads_back(self):
        payload = pentagon_payload(FIXTURE.pentagon, SAMPLE_COORDS, 1.36, FIXTURE.witness,
                                   description="worked example")
        parsed = pentagon_from_dict(json.loads(render_json(payload)))
        self.assertEqual(parsed.pentagon.delta, FIXTURE.pentagon.delta)
        self.assertEqual(parsed.t45, 1.36)
        self.assertEqual(parsed.coords.sigma, SAMPLE_COORDS.sigma)
        self.assertEqual(parsed.pentagon.points[4].rep.tolist(),
                         FIXTURE.pentagon.points[4].rep.tolist())

    def test_optional_fields_omitted(self):
        payload = pentagon_payload(FIXTURE.pentagon)
        self.assertEqual(set(payload), {"version", "delta", "gram", "points"})


if __name__ == "__main__":
    unittest.main()
