#!/usr/bin/env python3
"""
Tests for cli/workbench.py

Drives every subcommand through dispatch() with in-memory streams and checks
printed results and exit codes.
"""

import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path
import sys

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli.constants import EXIT_ACCEPT, EXIT_ERROR, EXIT_REJECT
from cli.machine_format import load_machine
from cli.workbench import dispatch, main
from tests import CONFIGS_DIR


HAS_AB = str(CONFIGS_DIR / "afa_has_ab.json")
ROTATION = str(CONFIGS_DIR / "rotation_nqfa.json")
ZERO = str(CONFIGS_DIR / "zero_nqfa.json")


def run_workbench(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


class TestRun(unittest.TestCase):
    """Test the run subcommand"""

    def test_accept(self):
        """Test an accepted word prints ACCEPT and exits 0"""
        code, out, _ = run_workbench("run", HAS_AB, "ab")
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.strip(), "ACCEPT")

    def test_reject(self):
        """Test a rejected word prints REJECT and exits 1"""
        code, out, _ = run_workbench("run", HAS_AB, "aa")
        self.assertEqual(code, EXIT_REJECT)
        self.assertEqual(out.strip(), "REJECT")

    def test_empty_word_spellings(self):
        """Test "" and "ε" both name the empty word"""
        self.assertEqual(run_workbench("run", HAS_AB, "")[0], EXIT_REJECT)
        self.assertEqual(run_workbench("run", HAS_AB, "ε")[0], EXIT_REJECT)

    def test_qfa_probability_logged(self):
        """Test a qfa run logs the exact acceptance probability"""
        code, out, err = run_workbench("run", ROTATION, "a")
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.strip(), "ACCEPT")
        self.assertIn("P_accept(a) = 16/25", err)

    def test_qfa_universal_mode(self):
        """Test --mode uqfa needs probability exactly 1"""
        code, out, _ = run_workbench("run", ROTATION, "a", "--mode", "uqfa")
        self.assertEqual(code, EXIT_REJECT)
        self.assertEqual(out.strip(), "REJECT")

    def test_tree_written(self):
        """Test --tree writes a DOT digraph"""
        with tempfile.TemporaryDirectory() as tmp:
            tree_path = Path(tmp) / "trees" / "has_ab.gv"
            code, _, err = run_workbench("run", HAS_AB, "ab", "--tree", str(tree_path))
            self.assertEqual(code, EXIT_ACCEPT)
            self.assertTrue(tree_path.read_text(encoding="utf-8").startswith("digraph"))
            self.assertIn("✅", err)

    def test_foreign_symbol(self):
        """Test a symbol outside Σ is an error"""
        code, out, err = run_workbench("run", HAS_AB, "abc")
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, "")
        self.assertIn("❌", err)
        self.assertIn("'c'", err)

    def test_quiet_hides_info(self):
        """Test --quiet suppresses INFO lines"""
        _, _, err = run_workbench("--quiet", "run", ROTATION, "a")
        self.assertNotIn("P_accept", err)


class TestEnumerate(unittest.TestCase):
    """Test the enumerate subcommand"""

    def test_shortlex_listing(self):
        """Test accepted words up to length 2 in shortlex order"""
        code, out, _ = run_workbench("enumerate", HAS_AB, "--max-len", "2")
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.splitlines(), ["ab", "ba"])

    def test_nothing_accepted(self):
        """Test a machine with an empty language prints nothing"""
        code, out, err = run_workbench("enumerate", ZERO, "--max-len", "2")
        self.assertEqual((code, out), (EXIT_ACCEPT, ""))
        self.assertIn("0 accepted word(s)", err)

    def test_empty_word_is_a_blank_line(self):
        """Test ε is printed as an empty line"""
        with tempfile.TemporaryDirectory() as tmp:
            self.assertEqual(run_workbench("build", "usquare-pa1ca", "-o", f"{tmp}/sq.json")[0], EXIT_ACCEPT)
            _, out, _ = run_workbench("enumerate", f"{tmp}/sq.json", "--max-len", "1")
            self.assertEqual(out.split("\n"), ["", "1", ""])

    def test_negative_length(self):
        """Test a negative --max-len is a usage error"""
        code, _, err = run_workbench("enumerate", HAS_AB, "--max-len", "-1")
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("--max-len", err)


class TestEmptiness(unittest.TestCase):
    """Test the emptiness subcommand"""

    def test_qfa_empty(self):
        """Test a qfa that never accepts is EMPTY"""
        code, out, _ = run_workbench("emptiness", ZERO)
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.strip(), "EMPTY")

    def test_qfa_nonempty(self):
        """Test the rotation qfa reports its shortest witness"""
        code, out, _ = run_workbench("emptiness", ROTATION)
        self.assertEqual(code, EXIT_REJECT)
        self.assertEqual(out.strip(), "NONEMPTY a")

    def test_uqfa_mode_undecidable_without_bound(self):
        """Test uqfa-mode emptiness of a qfa requires --bounded"""
        code, out, err = run_workbench("emptiness", ROTATION, "--mode", "uqfa")
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, "")
        self.assertIn("undecidable", err)
        self.assertIn("uqfa", err)

    def test_uqfa_mode_bounded_sweep(self):
        """Test a bounded sweep honours the uqfa acceptance condition"""
        # f(a) = 16/25, f(aa) = 576/625 and the rotation angle is irrational
        code, out, _ = run_workbench("emptiness", ROTATION, "--mode", "uqfa", "--bounded", "3")
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.strip(), "NO WITNESS ≤ 3")
        code, out, _ = run_workbench("emptiness", ROTATION, "--mode", "nqfa", "--bounded", "3")
        self.assertEqual(code, EXIT_REJECT)
        self.assertEqual(out.strip(), "NONEMPTY a")

    def test_undecidable_without_bound(self):
        """Test alternating machines require --bounded"""
        code, out, err = run_workbench("emptiness", HAS_AB)
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, "")
        self.assertIn("undecidable", err)

    def test_bounded_without_witness(self):
        """Test a bounded sweep that finds nothing is not conclusive"""
        code, out, err = run_workbench("emptiness", HAS_AB, "--bounded", "1")
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(out.strip(), "NO WITNESS ≤ 1")
        self.assertIn("⚠️", err)

    def test_bounded_with_witness(self):
        """Test a bounded sweep reports the shortlex-least witness"""
        code, out, _ = run_workbench("emptiness", HAS_AB, "--bounded", "2")
        self.assertEqual(code, EXIT_REJECT)
        self.assertEqual(out.strip(), "NONEMPTY ab")

    def test_negative_bound(self):
        """Test a negative --bounded is a usage error"""
        self.assertEqual(run_workbench("emptiness", HAS_AB, "--bounded", "-3")[0], EXIT_ERROR)


class TestCompileBuildCheck(unittest.TestCase):
    """Test compile-tm, build and check"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out_dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_compile_tm(self):
        """Test a compiled Turing machine is written as a checked a1ca file"""
        target = self.out_dir / "write2.json"
        code, _, err = run_workbench("compile-tm", str(CONFIGS_DIR / "tm_write2.json"), "-o", str(target))
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertIn("u^8", err)
        self.assertEqual(load_machine(target).kind, "a1ca")
        code, out, _ = run_workbench("check", str(target))
        self.assertEqual((code, out.strip()), (EXIT_ACCEPT, "OK a1ca"))
        self.assertEqual(run_workbench("run", str(target), "u" * 8)[:2], (EXIT_ACCEPT, "ACCEPT\n"))
        self.assertEqual(run_workbench("run", str(target), "u" * 6)[:2], (EXIT_REJECT, "REJECT\n"))

    def test_build_is_byte_stable(self):
        """Test two builds of the same construction write identical bytes"""
        first, second = self.out_dir / "first.json", self.out_dir / "second.json"
        run_workbench("build", "twin", "-o", str(first))
        run_workbench("build", "twin", "-o", str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_build_then_check(self):
        """Test every built-in construction round-trips through check"""
        for name, kind in (("upower", "pafa"), ("twin", "pafa"), ("usquare-pa1ca", "pa1ca"), ("usquare-aqfa", "aqfa")):
            with self.subTest(name=name):
                target = self.out_dir / f"{name}.json"
                self.assertEqual(run_workbench("build", name, "-o", str(target))[0], EXIT_ACCEPT)
                code, out, _ = run_workbench("check", str(target))
                self.assertEqual((code, out.strip()), (EXIT_ACCEPT, f"OK {kind}"))

    def test_built_upower_runs(self):
        """Test the written UPOWER file decides 1^4"""
        target = self.out_dir / "upower.json"
        run_workbench("build", "upower", "-o", str(target))
        self.assertEqual(run_workbench("run", str(target), "1111")[1].strip(), "ACCEPT")
        self.assertEqual(run_workbench("run", str(target), "111")[1].strip(), "REJECT")

    def test_unknown_builtin(self):
        """Test an unknown construction name is a usage error"""
        code, _, err = run_workbench("build", "nosuch", "-o", str(self.out_dir / "x.json"))
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("invalid choice", err)

    def test_check_invalid_machine(self):
        """Test validation errors are listed one per line"""
        data = json.loads(Path(HAS_AB).read_text(encoding="utf-8"))
        data["machine"]["accepting"] = "zz"
        target = self.out_dir / "broken.json"
        target.write_text(json.dumps(data), encoding="utf-8")
        code, out, err = run_workbench("check", str(target))
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, "")
        self.assertIn("validation error(s):", err)
        self.assertTrue(err.startswith("❌"))
        self.assertIn("  - accepting state 'zz' is not declared", err)

    def test_missing_file(self):
        """Test a missing machine file is an error"""
        code, _, err = run_workbench("check", str(self.out_dir / "absent.json"))
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("❌ File not found", err)


class TestCommandLine(unittest.TestCase):
    """Test argument parsing and entry points"""

    def test_unknown_subcommand(self):
        """Test an unknown subcommand exits 2"""
        code, _, err = run_workbench("frobnicate")
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("invalid choice", err)

    def test_no_arguments(self):
        """Test a missing subcommand exits 2 with usage"""
        code, _, err = run_workbench()
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("usage:", err)

    def test_help(self):
        """Test --help exits 0"""
        with contextlib.redirect_stdout(io.StringIO()) as captured:
            code, _, _ = run_workbench("--help")
        self.assertEqual(code, 0)
        self.assertIn("compile-tm", captured.getvalue())

    def test_main(self):
        """Test main() uses the process streams"""
        with contextlib.redirect_stdout(io.StringIO()) as captured:
            code = main(["run", HAS_AB, "ba"])
        self.assertEqual(code, EXIT_ACCEPT)
        self.assertEqual(captured.getvalue().strip(), "ACCEPT")


if __name__ == '__main__':
    unittest.main()
