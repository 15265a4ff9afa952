"""
Tests for the latgap command-line interface.
"""

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout
from unittest.mock import patch

import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from latgap.cli import build_parser, main
from latgap.frobenius import FrobeniusResult

LAMBDA_357 = {"kind": "group", "basis": [[1, 5], [0, 7]], "l": ["3", "5"]}
Z_3Z = {"kind": "group", "basis": [[1, 0], [0, 3]], "l": [1, 1]}
KNAPSACK = {"kind": "ip", "A": [[3, 5, 7]], "b": [10], "c": [1, 1, 1]}


class CliTestCase(unittest.TestCase):
    """Runs main() with captured stdout and temporary instance files."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, document, name="instance.json") -> str:
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as fh:
            if isinstance(document, str):
                fh.write(document)
            else:
                json.dump(document, fh)
        return path

    def run_cli(self, argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = main(argv)
        return code, json.loads(out.getvalue())

    def run_doc(self, command, document, *extra):
        return self.run_cli([command, "--input", self.write(document), *extra])


class TestGroupCommands(CliTestCase):
    """Test gap and solve."""

    def test_gap(self):
        """Test gap on the (3, 5, 7) lattice."""
        code, out = self.run_doc("gap", LAMBDA_357)
        self.assertEqual(code, 0)
        self.assertEqual(out["gap"], "11")
        self.assertEqual(out["cosets"], 7)
        self.assertIn("elapsed", out)
        self.assertNotIn("verified", out)

    def test_gap_witness(self):
        """Test the witness of Z x 3Z and --verify."""
        code, out = self.run_doc("gap", Z_3Z, "--verify")
        self.assertEqual(code, 0)
        self.assertEqual(out["gap"], "2")
        self.assertEqual(out["witness_x"], [0, 2])
        self.assertTrue(out["verified"])

    def test_rational_gap(self):
        """Test that rational gaps are printed as p/q."""
        doc = dict(Z_3Z, l=["1/2", "1/3"])
        code, out = self.run_doc("gap", doc)
        self.assertEqual(code, 0)
        self.assertEqual(out["gap"], "2/3")

    def test_solve(self):
        """Test solve with a residue vector."""
        code, out = self.run_doc("solve", dict(LAMBDA_357, r=[1, 0]), "--verify")
        self.assertEqual(code, 0)
        self.assertEqual(out["value"], "3")
        self.assertEqual(out["minimizer"], [1, 0])
        self.assertTrue(out["verified"])

    def test_solve_needs_residue(self):
        """Test that solve without r is invalid input."""
        code, out = self.run_doc("solve", LAMBDA_357)
        self.assertEqual(code, 2)
        self.assertIn("error", out)

    def test_stdin(self):
        """Test reading the document from stdin."""
        with patch("sys.stdin", io.StringIO(json.dumps(Z_3Z))):
            code, out = self.run_cli(["gap", "--input", "-"])
        self.assertEqual(code, 0)
        self.assertEqual(out["gap"], "2")


class TestFrobeniusCommand(CliTestCase):
    """Test the frobenius subcommand."""

    def test_inline_vector(self):
        """Test --a 3,5,7 with the last entry as modulus."""
        code, out = self.run_cli(["frobenius", "--a", "3,5,7"])
        self.assertEqual(code, 0)
        self.assertEqual(out, {"frobenius": 4, "gap": "11", "det": 7, "modulus": 7})

    def test_smallest_modulus(self):
        """Test --smallest-modulus."""
        code, out = self.run_cli(["frobenius", "--a", "3,5,7", "--smallest-modulus"])
        self.assertEqual(code, 0)
        self.assertEqual(out["frobenius"], 4)
        self.assertEqual(out["modulus"], 3)
        self.assertEqual(out["gap"], "7")

    def test_verify(self):
        """Test the representability check of the answer."""
        code, out = self.run_doc("frobenius", {"kind": "frobenius", "a": [6, 10, 15]}, "--verify")
        self.assertEqual(code, 0)
        self.assertEqual(out["frobenius"], 29)
        self.assertTrue(out["verified"])

    def test_verify_checks_full_run(self):
        """Test that a wrong answer fails even when f + 1 is representable."""
        # 2 is not representable by (3, 5, 7) and 3 is, but 4 is not
        wrong = FrobeniusResult(frobenius=2, gap=9, det=7, modulus=7, order=(0, 1, 2))
        with patch("latgap.cli.frobenius_report", return_value=wrong):
            code, out = self.run_cli(["frobenius", "--a", "3,5,7", "--verify"])
        self.assertEqual(code, 0)
        self.assertFalse(out["verified"])

    def test_not_primitive(self):
        """Test that a vector with gcd 2 is invalid input."""
        code, out = self.run_cli(["frobenius", "--a", "2,4"])
        self.assertEqual(code, 2)
        self.assertIn("NotPrimitive", out["error"])


class TestBoundsCommand(CliTestCase):
    """Test the bounds subcommand."""

    def test_bounds_with_gap(self):
        """Test the report on Z x 3Z."""
        code, out = self.run_doc("bounds", Z_3Z, "--with-gap")
        self.assertEqual(code, 0)
        self.assertEqual(out["lower_rho"], {"value": 1.0, "rounding": "down"})
        self.assertEqual(out["gap"], "2")
        self.assertEqual(out["upper"]["rounding"], "up")
        self.assertLessEqual(out["lower_factorial"]["value"], 2)
        self.assertGreaterEqual(out["upper"]["value"], 2)

    def test_bounds_dimension_three(self):
        """Test that the rho_k bound is omitted for k = 3."""
        doc = {"kind": "group", "basis": [[1, 0, 0], [0, 1, 0], [0, 0, 7]], "l": [1, 1, 1]}
        code, out = self.run_doc("bounds", doc)
        self.assertEqual(code, 0)
        self.assertNotIn("lower_rho", out)
        self.assertNotIn("gap", out)


class TestRelaxCommand(CliTestCase):
    """Test the relax subcommand."""

    def test_relax(self):
        """Test the relaxation of the (3, 5, 7) knapsack."""
        code, out = self.run_doc("relax", KNAPSACK, "--verify")
        self.assertEqual(code, 0)
        self.assertEqual(out["lp"]["basis"], [2])
        self.assertEqual(out["lp"]["lp_value"], "10/7")
        self.assertEqual(out["lp"]["reduced_costs"], ["4/7", "2/7"])
        self.assertEqual(out["relaxation"]["det"], 7)
        self.assertEqual(out["bound"], "2")
        self.assertTrue(out["ip_optimal"])
        self.assertTrue(out["verified"])

    def test_relax_witness(self):
        """Test the witness right-hand side."""
        code, out = self.run_doc("relax", KNAPSACK, "--witness")
        self.assertEqual(code, 0)
        self.assertEqual(out["witness"], {"b_prime": [9], "u": [3, 0, 0], "gap": "12/7", "predicted": "3"})

    def test_relax_single_row(self):
        """Test --row on a one-row program."""
        code, out = self.run_doc("relax", KNAPSACK, "--row", "0")
        self.assertEqual(code, 0)
        self.assertEqual(out["relaxation"]["row"], 0)
        self.assertEqual(out["bound"], "2")

    def test_relax_rejects_group(self):
        """Test that relax needs an ip instance."""
        code, _ = self.run_doc("relax", Z_3Z)
        self.assertEqual(code, 2)


class TestOracleCommand(CliTestCase):
    """Test the brute-force oracles."""

    def test_frobenius_oracle(self):
        """Test the representability table."""
        code, out = self.run_cli(["oracle", "--a", "3,5"])
        self.assertEqual(code, 0)
        self.assertEqual(out, {"frobenius": 7})

    def test_ip_oracle(self):
        """Test IP brute force with and without a feasible point."""
        code, out = self.run_doc("oracle", KNAPSACK)
        self.assertEqual(code, 0)
        self.assertEqual(out, {"value": "2", "x": [0, 2, 0], "box": 3})
        code, out = self.run_doc("oracle", dict(KNAPSACK, b=[1]))
        self.assertEqual(code, 0)
        self.assertEqual(out["value"], "infeasible")

    def test_group_oracle(self):
        """Test the group oracle with and without r."""
        code, out = self.run_doc("oracle", dict(LAMBDA_357, r=[0, 1]))
        self.assertEqual(code, 0)
        self.assertEqual(out, {"value": "5"})
        code, out = self.run_doc("oracle", LAMBDA_357)
        self.assertEqual(code, 0)
        self.assertEqual(out, {"gap": "11", "cosets": 7})

    def test_oracle_limit(self):
        """Test that a group oracle above the coset limit exits with 3."""
        code, out = self.run_doc("oracle", {"kind": "group", "basis": [[20000]], "l": [1]})
        self.assertEqual(code, 3)
        self.assertIn("CosetLimitExceeded", out["error"])


class TestCoverCheckCommand(CliTestCase):
    """Test the cover-check subcommand."""

    def test_default_radius(self):
        """Test that the covering radius leaves no uncovered grid point."""
        code, out = self.run_doc("cover-check", Z_3Z, "--grid-h", "1/8")
        self.assertEqual(code, 0)
        self.assertEqual(out["rho"], "4")
        self.assertEqual(out["points"], 192)
        self.assertEqual(out["uncovered"], [])
        self.assertEqual(out["verdict"], "no uncovered grid point found")

    def test_smaller_radius(self):
        """Test an explicit radius below the covering radius."""
        code, out = self.run_doc("cover-check", Z_3Z, "--grid-h", "1/8", "--rho", "7/2")
        self.assertEqual(code, 0)
        self.assertIn(["7/8", "23/8"], out["uncovered"])
        self.assertEqual(out["verdict"], "uncovered points found")


class TestExitCodes(CliTestCase):
    """Test error reporting and exit codes."""

    def test_float_rejected(self):
        """Test that JSON floats are invalid input."""
        code, out = self.run_doc("gap", '{"kind": "group", "basis": [[1, 0], [0, 3]], "l": [0.5, 1]}')
        self.assertEqual(code, 2)
        self.assertIn("InstanceFormatError", out["error"])

    def test_missing_file(self):
        """Test an unreadable input path."""
        code, out = self.run_cli(["gap", "--input", os.path.join(self.tmp.name, "missing.json")])
        self.assertEqual(code, 2)
        self.assertEqual(out["exit_code"], 2)

    def test_no_input(self):
        """Test a command without any instance."""
        code, _ = self.run_cli(["gap"])
        self.assertEqual(code, 2)

    def test_extra_field(self):
        """Test that unknown fields are rejected."""
        code, _ = self.run_doc("gap", dict(Z_3Z, extra=1))
        self.assertEqual(code, 2)

    def test_singular_basis(self):
        """Test a singular lattice basis."""
        code, out = self.run_doc("gap", {"kind": "group", "basis": [[1, 2], [2, 4]], "l": [1, 1]})
        self.assertEqual(code, 2)
        self.assertIn("SingularBasis", out["error"])

    def test_residue_dimension(self):
        """Test a residue of the wrong length."""
        code, out = self.run_doc("solve", dict(Z_3Z, r=[1, 2, 3]))
        self.assertEqual(code, 2)
        self.assertIn("DimensionMismatch", out["error"])

    def test_non_generic_relax(self):
        """Test a relaxation with a vanishing reduced cost."""
        code, out = self.run_doc("relax", {"kind": "ip", "A": [[2, 4]], "b": [4], "c": [1, 2]})
        self.assertEqual(code, 2)
        self.assertIn("NonGenericReducedCosts", out["error"])

    def test_oracle_box_too_large(self):
        """Test the IP brute force node guard."""
        with patch.dict(os.environ, {"LATGAP_ORACLE_POINTS": "10"}):
            code, out = self.run_doc("oracle", KNAPSACK, "--box", "100")
        self.assertEqual(code, 3)
        self.assertIn("OracleLimitExceeded", out["error"])

    def test_coset_limit_flag(self):
        """Test --max-cosets."""
        code, out = self.run_doc("gap", Z_3Z, "--max-cosets", "2")
        self.assertEqual(code, 3)
        self.assertEqual(out["exit_code"], 3)

    def test_coset_limit_environment(self):
        """Test LATGAP_MAX_COSETS."""
        with patch.dict(os.environ, {"LATGAP_MAX_COSETS": "2"}):
            code, _ = self.run_doc("gap", Z_3Z)
        self.assertEqual(code, 3)

    def test_invalid_environment(self):
        """Test that a malformed setting is invalid input."""
        with patch.dict(os.environ, {"LATGAP_MAX_COSETS": "many"}):
            code, out = self.run_doc("gap", Z_3Z)
        self.assertEqual(code, 2)
        self.assertIn("LATGAP_MAX_COSETS", out["error"])


class TestBatch(CliTestCase):
    """Test batch documents."""

    def test_order_and_failures(self):
        """Test that results keep the input order and failures stay local."""
        docs = [Z_3Z, LAMBDA_357, {"kind": "group", "basis": [[1, 2], [2, 4]], "l": [1, 1]}, Z_3Z]
        code, out = self.run_doc("gap", docs, "--jobs", "2")
        self.assertEqual(code, 2)
        self.assertEqual(len(out), 4)
        self.assertEqual(out[0]["gap"], "2")
        self.assertEqual(out[1]["gap"], "11")
        self.assertEqual(out[2]["exit_code"], 2)
        self.assertEqual(out[3]["gap"], "2")

    def test_first_failure_sets_exit_code(self):
        """Test that the first failing instance decides the exit code."""
        big = {"kind": "group", "basis": [[1, 0], [0, 50]], "l": [1, 1]}
        bad = {"kind": "group", "basis": [[1, 2], [2, 4]], "l": [1, 1]}
        code, out = self.run_doc("gap", [Z_3Z, big, bad], "--max-cosets", "10")
        self.assertEqual(code, 3)
        self.assertEqual([entry.get("exit_code") for entry in out], [None, 3, 2])

    def test_single_element_batch(self):
        """Test that a one-element array still prints an array."""
        code, out = self.run_doc("gap", [Z_3Z])
        self.assertEqual(code, 0)
        self.assertIsInstance(out, list)


class TestParser(unittest.TestCase):
    """Test argument parsing."""

    def test_defaults(self):
        """Test parser defaults."""
        args = build_parser().parse_args(["gap", "-i", "x.json"])
        self.assertEqual(args.input, "x.json")
        self.assertEqual(args.grid_h, "1/16")
        self.assertFalse(args.verify)
        self.assertIsNone(args.row)

    def test_unknown_command(self):
        """Test that an unknown command is rejected by argparse."""
        with patch("sys.stderr", io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                build_parser().parse_args(["frob"])
        self.assertEqual(ctx.exception.code, 2)


if __name__ == '__main__':
    unittest.main()
