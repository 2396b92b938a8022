"""
Tests for the command-line entry point: argument handling and exit codes.
"""

import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

# Ensure project root is on the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from config import FIXTURE_PATH, ConfigurationError
from main import build_parser, main
from pipeline import EXIT_INPUT, EXIT_OK


class TestParser(unittest.TestCase):

    def test_defaults(self):
        args = build_parser().parse_args(["bend-scan", "--input", "p.json"])
        self.assertEqual(args.pair, 1)
        self.assertEqual(args.format, "csv")
        self.assertEqual(args.delta, "omega2")

    def test_negative_complex_tau(self):
        args = build_parser().parse_args(["build", "--tau=-2.22-3.845152792802909j"])
        self.assertEqual(args.tau, complex(-2.22, -3.845152792802909))

    def test_unknown_command(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["reconcile"])

    def test_bad_complex(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["build", "--tau", "abc"])


class TestMain(unittest.TestCase):

    def test_verify_example(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "verify.json"
            self.assertEqual(main(["verify-example", "--output", str(target)]), EXIT_OK)
            self.assertTrue(target.exists())

    def test_check_needs_input(self):
        self.assertEqual(main(["check"]), EXIT_INPUT)

    def test_build_needs_both_coordinates(self):
        self.assertEqual(main(["build", "--s1", "-0.615", "--t45", "1.36"]), EXIT_INPUT)

    def test_bad_tolerance(self):
        argv = ["check", "--input", str(FIXTURE_PATH), "--eq-tol", "0"]
        self.assertEqual(main(argv), EXIT_INPUT)

    def test_build_command(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            target = Path(tmpdir) / "built.json"
            argv = ["build", "--s1=-0.615", "--s2", "1.36", "--t45", "1.36", "--output", str(target)]
            self.assertEqual(main(argv), EXIT_OK)
            self.assertTrue(target.exists())

    @patch("main.validate_config", side_effect=ConfigurationError("fixture missing"))
    def test_configuration_error(self, _mock_validate):
        self.assertEqual(main(["verify-example"]), 1)


if __name__ == "__main__":
    unittest.main()
