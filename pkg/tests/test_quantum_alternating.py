#!/usr/bin/env python3
"""
Tests for cli/quantum_alternating.py
"""

import random
import unittest
from pathlib import Path
import sys

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli.constants import END_MARKER
from cli.errors import SymbolError
from cli.exact import basis_vector, to_vector, vector_norm2
from cli.machine_format import load_machine
from cli.quantum import Superoperator, complement_qfa, nqfa_accepts, uqfa_accepts, zero_qfa
from cli.quantum_alternating import (
    AqfaDescription,
    AqfaEvaluator,
    aqfa_accepts,
    aqfa_tree,
    build_usquare_aqfa,
    outcome_branches,
    validate_aqfa,
    wrap_qfa_as_aqfa,
)
from cli.tape import Alphabet, Verdict
from tests import CONFIGS_DIR
from tests.random_machines import random_qfa


def accept_everything() -> AqfaDescription:
    alphabet = Alphabet(("a",))
    return AqfaDescription(
        alphabet=alphabet,
        classical_states=("acc",),
        universal=frozenset(),
        classical_initial="acc",
        classical_accept=frozenset({"acc"}),
        basis=("q",),
        initial="q",
        ops={("acc", symbol): Superoperator.identity(1) for symbol in alphabet.with_end()},
        cdelta={("acc", symbol, 0): "acc" for symbol in alphabet.with_end()},
    )


class TestQfaWrappers(unittest.TestCase):
    """Test AQFAs built from QFAs agree with the QFA acceptance modes"""

    def test_rotation(self):
        """Test the bundled rotation in both modes"""
        qfa = load_machine(CONFIGS_DIR / "rotation_nqfa.json").payload
        existential, universal = wrap_qfa_as_aqfa(qfa), wrap_qfa_as_aqfa(qfa, universal=True)
        self.assertEqual(validate_aqfa(existential), [])
        self.assertEqual(aqfa_accepts(existential, ""), Verdict.REJECT)
        self.assertEqual(aqfa_accepts(existential, "a"), Verdict.ACCEPT)
        self.assertEqual(aqfa_accepts(universal, "a"), Verdict.REJECT)

    def test_random_machines(self):
        """Test 100 random QFAs in both modes on short words"""
        rng = random.Random(42)
        for _ in range(100):
            symbols = rng.choice(("a", "ab"))
            qfa = random_qfa(rng, symbols=symbols)
            word = "".join(rng.choice(symbols) for _ in range(rng.randint(0, 3)))
            self.assertEqual(aqfa_accepts(wrap_qfa_as_aqfa(qfa), word), nqfa_accepts(qfa, word))
            self.assertEqual(aqfa_accepts(wrap_qfa_as_aqfa(qfa, universal=True), word), uqfa_accepts(qfa, word))

    def test_tree_matches_verdict(self):
        """Test the outcome tree's root agrees with aqfa_accepts"""
        qfa = load_machine(CONFIGS_DIR / "rotation_nqfa.json").payload
        m = wrap_qfa_as_aqfa(qfa)
        for word in ("", "a", "aa"):
            tree = aqfa_tree(m, word)
            self.assertEqual(tree.value, aqfa_accepts(m, word).accepted)
            self.assertTrue(tree.recompute())
            self.assertTrue(all(edge.startswith("k=") for node in tree.walk() for edge, _ in node.children))


class TestOutcomeBranches(unittest.TestCase):
    """Test outcome_branches"""

    def test_branches_conserve_norm(self):
        """Test Σ ‖E_k ψ‖² = ‖ψ‖² over the nonzero branches"""
        rng = random.Random(7)
        for _ in range(1000):
            qfa = random_qfa(rng)
            m = wrap_qfa_as_aqfa(qfa)
            psi = basis_vector(qfa.dimension, rng.randrange(qfa.dimension))
            branches = outcome_branches(m, "run", "a", psi)
            self.assertEqual(sum(vector_norm2(phi) for _, _, phi in branches), vector_norm2(psi))
            self.assertTrue(all(vector_norm2(phi) > 0 for _, _, phi in branches))

    def test_difference_branch_only_off_squares(self):
        """Test the judge's difference outcome exists iff i² ≠ m"""
        m = build_usquare_aqfa()
        for i, total in ((2, 4), (3, 9), (2, 5), (3, 8), (1, 2)):
            psi = to_vector([1, i, i * i, i * i, total])
            outcomes = {k: target for k, target, _ in outcome_branches(m, "judge", END_MARKER, psi)}
            if i * i == total:
                self.assertNotIn(0, outcomes)
            else:
                self.assertEqual(outcomes[0], "rej")
            self.assertTrue(all(target == "acc" for k, target in outcomes.items() if k != 0))


class TestUsquare(unittest.TestCase):
    """Test the two-alternation AQFA for perfect squares"""

    def test_validates(self):
        """Test the construction is well-formed"""
        m = build_usquare_aqfa()
        self.assertEqual(validate_aqfa(m), [])
        self.assertEqual(m.universal, frozenset({"judge"}))

    def test_squares(self):
        """Test a^m is accepted iff m ∈ {1, 4, 9, 16, 25} for 1 ≤ m ≤ 26"""
        m = build_usquare_aqfa()
        for n in range(1, 27):
            with self.subTest(m=n):
                expected = Verdict.ACCEPT if n in (1, 4, 9, 16, 25) else Verdict.REJECT
                self.assertEqual(aqfa_accepts(m, "a" * n), expected)

    def test_empty_word_rejected(self):
        """Test i ≥ 1, so ε is rejected"""
        self.assertEqual(aqfa_accepts(build_usquare_aqfa(), ""), Verdict.REJECT)


class TestEvaluator(unittest.TestCase):
    """Test pruning and edge cases"""

    def test_accept_everything(self):
        """Test a machine that never leaves its accepting state"""
        m = accept_everything()
        self.assertEqual(validate_aqfa(m), [])
        for word in ("", "a", "aaaa"):
            self.assertEqual(aqfa_accepts(m, word), Verdict.ACCEPT)

    def test_safe_states_are_not_expanded(self):
        """Test a state that cannot leave the accepting set is decided at once"""
        m = accept_everything()
        evaluator = AqfaEvaluator(m, "aaa")
        self.assertTrue(evaluator.value("acc", 0, m.initial_vector()))
        self.assertEqual(evaluator.expansions, 0)

    def test_thousand_symbol_words(self):
        """Test the wrappers of constant qfas on a 1000-symbol word"""
        alphabet = Alphabet(("a",))
        ones = complement_qfa(zero_qfa(alphabet))
        word = "a" * 1000
        for universal in (False, True):
            self.assertEqual(aqfa_accepts(wrap_qfa_as_aqfa(ones, universal), word), Verdict.ACCEPT)
            self.assertEqual(aqfa_accepts(wrap_qfa_as_aqfa(zero_qfa(alphabet), universal), word), Verdict.REJECT)

    def test_thousand_symbol_tree(self):
        """Test aqfa_tree materializes a single 2004-level path"""
        ones = complement_qfa(zero_qfa(Alphabet(("a",))))
        tree = aqfa_tree(wrap_qfa_as_aqfa(ones), "a" * 1000)
        self.assertTrue(tree.value)
        self.assertEqual(set(tree.path_lengths()), {2004})
        self.assertTrue(tree.recompute())

    def test_foreign_symbol(self):
        """Test SymbolError for words outside Σ"""
        with self.assertRaises(SymbolError):
            aqfa_accepts(accept_everything(), "b")

    def test_validation_messages(self):
        """Test missing and out-of-range cdelta entries"""
        m = accept_everything()
        cdelta = dict(m.cdelta)
        del cdelta[("acc", "a", 0)]
        cdelta[("acc", END_MARKER, 3)] = "acc"
        broken = AqfaDescription(m.alphabet, m.classical_states, m.universal, m.classical_initial,
                                 m.classical_accept, m.basis, m.initial, m.ops, cdelta)
        problems = validate_aqfa(broken)
        self.assertIn("cdelta(acc, a, 0) is undefined", problems)
        self.assertIn("cdelta(acc, @end, 3) names an outcome the superoperator lacks", problems)


if __name__ == '__main__':
    unittest.main()
