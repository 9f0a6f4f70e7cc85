#!/usr/bin/env python3
"""
Alternating Quantum Finite Automata

An AQFA has classical states (existential or universal) and a quantum
register. Reading a symbol in classical state s applies the superoperator
ops[(s, σ)] to the pure state |ψ⟩; every outcome k with E_k|ψ⟩ ≠ 0 opens a
child (cdelta[(s, σ, k)], E_k|ψ⟩). Only whether a branch exists matters,
never its probability, so |ψ⟩ is kept unnormalized and exact.

Like every realtime model here, the machine spends two steps per tape
symbol of ¢w¢; leaves are true iff their classical state is accepting.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Set, Tuple

import numpy as np

from cli.computation_tree import EXISTENTIAL, LEAF, UNIVERSAL, TreeNode, build_tree, evaluate_and_or
from cli.constants import END_MARKER, KEY_SEPARATOR
from cli.errors import MachineSchemaError
from cli.exact import basis_vector, identity, matmul, projective_key, vector_norm2, zeros
from cli.quantum import (
    QfaDescription,
    Superoperator,
    complete_superoperator,
    superoperator_from_json,
    superoperator_to_json,
    superoperator_violations,
)
from cli.tape import Alphabet, TapeView, Verdict, check_word, key_symbol, symbol_key

logger = logging.getLogger(__name__)

Branch = Tuple[int, str, np.ndarray]  # (outcome, classical target, unnormalized state)


@dataclass(frozen=True, eq=False)
class AqfaDescription:
    alphabet: Alphabet
    classical_states: Tuple[str, ...]
    universal: FrozenSet[str]
    classical_initial: str
    classical_accept: FrozenSet[str]
    basis: Tuple[str, ...]
    initial: str
    ops: Dict[Tuple[str, str], Superoperator]
    cdelta: Dict[Tuple[str, str, int], str]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def initial_vector(self) -> np.ndarray:
        return basis_vector(self.dimension, self.basis.index(self.initial))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AqfaDescription):
            return NotImplemented
        return (
            (self.alphabet, self.classical_states, self.universal, self.classical_initial,
             self.classical_accept, self.basis, self.initial, self.cdelta)
            == (other.alphabet, other.classical_states, other.universal, other.classical_initial,
                other.classical_accept, other.basis, other.initial, other.cdelta)
            and self.ops == other.ops
        )

    __hash__ = None


def validate_aqfa(m: AqfaDescription) -> List[str]:
    violations = []
    states = list(m.classical_states)
    if not states:
        violations.append("classical state set must not be empty")
    if len(set(states)) != len(states):
        violations.append("classical state names must be distinct")
    known = set(states)
    for state in states:
        if KEY_SEPARATOR in state:
            violations.append(f"classical state {state!r} contains the key separator {KEY_SEPARATOR!r}")
    if m.classical_initial not in known:
        violations.append(f"initial classical state {m.classical_initial!r} is not declared")
    for name, subset in (("universal", m.universal), ("accepting", m.classical_accept)):
        for state in sorted(set(subset) - known):
            violations.append(f"{name} set mentions undeclared classical state {state!r}")
    basis = list(m.basis)
    if not basis or len(set(basis)) != len(basis):
        violations.append("quantum basis must be nonempty with distinct names")
    if m.initial not in set(basis):
        violations.append(f"initial basis state {m.initial!r} is not declared")

    for state in states:
        for symbol in m.alphabet.with_end():
            where = f"ops({state}, {symbol_key(symbol)})"
            op = m.ops.get((state, symbol))
            if op is None:
                violations.append(f"{where} is undefined")
                continue
            violations.extend(superoperator_violations(op, len(basis), where))
            for k in range(len(op)):
                target = m.cdelta.get((state, symbol, k))
                if target is None:
                    violations.append(f"cdelta({state}, {symbol_key(symbol)}, {k}) is undefined")
                elif target not in known:
                    violations.append(f"cdelta({state}, {symbol_key(symbol)}, {k}) targets undeclared state {target!r}")
    for state, symbol in sorted(set(m.ops) - {(s, a) for s in states for a in m.alphabet.with_end()}):
        violations.append(f"ops defined for unknown (state, symbol) ({state}, {symbol_key(symbol)})")
    for state, symbol, k in sorted(m.cdelta):
        op = m.ops.get((state, symbol))
        if op is not None and not 0 <= k < len(op):
            violations.append(f"cdelta({state}, {symbol_key(symbol)}, {k}) names an outcome the superoperator lacks")
    return violations


# ===== EVALUATION =====

def outcome_branches(m: AqfaDescription, state: str, symbol: str, psi: np.ndarray) -> List[Branch]:
    """Children of (state, |ψ⟩) on ``symbol``: one per outcome with nonzero amplitude."""
    branches = []
    for k, element in enumerate(m.ops[(state, symbol)].elements):
        phi = matmul(element, psi)
        if vector_norm2(phi) > 0:
            branches.append((k, m.cdelta[(state, symbol, k)], phi))
    return branches


def _classical_reach(m: AqfaDescription, goal: Set[str]) -> Set[str]:
    """Classical states with some transition path into ``goal`` (amplitudes ignored)."""
    reach = set(goal)
    changed = True
    while changed:
        changed = False
        for (state, _, _), target in m.cdelta.items():
            if target in reach and state not in reach:
                reach.add(state)
                changed = True
    return reach


class AqfaEvaluator:
    """Memoized AND-OR evaluation keyed by (classical state, level, ray of |ψ⟩).

    Classical states that cannot reach an accepting state are false outright,
    and states that cannot leave the accepting set are true outright.
    """

    def __init__(self, machine: AqfaDescription, word: str):
        check_word(machine.alphabet, word)
        self.machine = machine
        self.tape = TapeView(word)
        accepting = set(machine.classical_accept)
        self.hopeful = _classical_reach(machine, accepting)
        self.risky = _classical_reach(machine, set(machine.classical_states) - accepting)
        self.memo: Dict[Tuple[str, int, Tuple], bool] = {}
        self.expansions = 0

    @staticmethod
    def _memo_key(node: Tuple[str, int, np.ndarray]):
        state, level, psi = node
        return state, level, projective_key(psi)

    def _expand(self, node: Tuple[str, int, np.ndarray]):
        state, level, psi = node
        if level == self.tape.depth:
            return state in self.machine.classical_accept
        if state not in self.hopeful:
            return False
        if state not in self.risky:
            return True
        self.expansions += 1
        children = (
            (target, level + 1, phi)
            for _, target, phi in outcome_branches(self.machine, state, self.tape.symbol_at(level), psi)
        )
        return state in self.machine.universal, children

    def value(self, state: str, level: int, psi: np.ndarray) -> bool:
        return evaluate_and_or((state, level, psi), self._expand, self.memo, key=self._memo_key)

    def _tree_node(self, node: Tuple[str, int, np.ndarray]):
        state, level, psi = node
        label = f"{state} ψ=({', '.join(str(entry) for entry in psi)})"
        if level == self.tape.depth:
            return TreeNode(level, label, LEAF, state in self.machine.classical_accept)
        symbol = self.tape.symbol_at(level)
        children = [
            (f"k={k}", (target, level + 1, phi))
            for k, target, phi in outcome_branches(self.machine, state, symbol, psi)
        ]
        connective = UNIVERSAL if state in self.machine.universal else EXISTENTIAL
        return level, f"{label} [{symbol}]", connective, children

    def tree(self, state: str, level: int, psi: np.ndarray) -> TreeNode:
        return build_tree((state, level, psi), self._tree_node)


def aqfa_accepts(m: AqfaDescription, w: str) -> Verdict:
    evaluator = AqfaEvaluator(m, w)
    verdict = Verdict.of(evaluator.value(m.classical_initial, 0, m.initial_vector()))
    logger.debug("aqfa %r: %s after %d expansions", w, verdict, evaluator.expansions)
    return verdict


def aqfa_tree(m: AqfaDescription, w: str) -> TreeNode:
    """The full outcome tree (no pruning) as a ComputationTree."""
    return AqfaEvaluator(m, w).tree(m.classical_initial, 0, m.initial_vector())


# ===== CONSTRUCTIONS =====

class _AqfaTable:
    """Fills ops/cdelta; anything left unset becomes identity into the default state."""

    def __init__(self, alphabet: Alphabet, states: Tuple[str, ...], dimension: int, default: str):
        self.alphabet = alphabet
        self.states = states
        self.dimension = dimension
        self.default = default
        self.ops: Dict[Tuple[str, str], Superoperator] = {}
        self.cdelta: Dict[Tuple[str, str, int], str] = {}

    def set(self, state: str, symbols, op: Superoperator, targets: List[str]) -> None:
        """``targets[k]`` receives outcome k; the last target also takes every later outcome."""
        for symbol in symbols:
            self.ops[(state, symbol)] = op
            for k in range(len(op)):
                self.cdelta[(state, symbol, k)] = targets[min(k, len(targets) - 1)]

    def finish(self) -> None:
        for state in self.states:
            for symbol in self.alphabet.with_end():
                if (state, symbol) not in self.ops:
                    self.set(state, [symbol], Superoperator.identity(self.dimension), [self.default])


def wrap_qfa_as_aqfa(m: QfaDescription, universal: bool = False) -> AqfaDescription:
    """AQFA whose tree accepts exactly when the QFA does in NQFA (or UQFA) mode.

    The wrapper replays the QFA's superoperators one per symbol, pads each
    symbol's second step with an identity, and on the right end-marker
    measures {P_a, P_r} into classical accept/reject states. All classical
    states are existential (NQFA) or all universal (UQFA).
    """
    states = ("start", "start2", "run", "run2", "meas", "acc", "rej")
    n = m.dimension
    table = _AqfaTable(m.alphabet, states, n, "rej")
    every = m.alphabet.with_end()
    table.set("start", [END_MARKER], m.ops[END_MARKER], ["start2"])
    table.set("start2", [END_MARKER], Superoperator.identity(n), ["run"])
    for symbol in m.alphabet:
        table.set("run", [symbol], m.ops[symbol], ["run2"])
        table.set("run2", [symbol], Superoperator.identity(n), ["run"])
    table.set("run", [END_MARKER], m.ops[END_MARKER], ["meas"])
    table.set("meas", [END_MARKER], Superoperator([m.projector(m.accept), m.projector(m.reject)]), ["acc", "rej"])
    table.set("acc", every, Superoperator.identity(n), ["acc"])
    table.set("rej", every, Superoperator.identity(n), ["rej"])
    table.finish()
    return AqfaDescription(
        alphabet=m.alphabet,
        classical_states=states,
        universal=frozenset(states) if universal else frozenset(),
        classical_initial="start",
        classical_accept=frozenset({"acc"}),
        basis=m.basis,
        initial=m.initial,
        ops=table.ops,
        cdelta=table.cdelta,
    )


def build_usquare_aqfa() -> AqfaDescription:
    """Two-alternation AQFA for {a^m : m = i², i ≥ 1}.

    Amplitudes track (1, j, j²) while scanning, using (j+1)² = j² + 2j + 1.
    The existential phase may pick the current position i, freezing i² and
    counting m from i onward. At the right end-marker a universal
    measurement has a "difference" outcome proportional to i² − m; it exists
    only when i² ≠ m and rejects, every other outcome accepts.
    """
    one, j, jsq, isq, total = range(5)
    size = 5
    alphabet = Alphabet(("a",))
    states = ("start", "start2", "scan", "scan2", "picked", "picked2", "judge", "acc", "rej")
    table = _AqfaTable(alphabet, states, size, "rej")

    increment = identity(size)
    increment[j, one] = increment[j, one] + 1
    increment[jsq, one] = increment[jsq, one] + 1
    increment[jsq, j] = increment[jsq, j] + 2
    _, scan_op = complete_superoperator([increment])

    keep = zeros(size)
    for index in (one, j, jsq):
        keep[index, index] = keep[index, index] + 1
    pick = zeros(size)
    pick[one, one] = pick[one, one] + 1
    pick[total, j] = pick[total, j] + 1
    pick[isq, jsq] = pick[isq, jsq] + 1
    _, choose_op = complete_superoperator([keep, pick])

    count = identity(size)
    count[total, one] = count[total, one] + 1
    _, count_op = complete_superoperator([count])

    difference = zeros(size)
    difference[one, isq] = difference[one, isq] + 1
    difference[one, total] = difference[one, total] - 1
    _, judge_op = complete_superoperator([difference])

    a, end, every = "a", END_MARKER, alphabet.with_end()
    same = Superoperator.identity(size)
    table.set("start", [end], same, ["start2"])
    table.set("start2", [end], same, ["scan"])
    table.set("scan", [a], scan_op, ["scan2", "rej"])
    table.set("scan2", [a], choose_op, ["scan", "picked", "rej"])
    table.set("picked", [a], count_op, ["picked2", "rej"])
    table.set("picked2", [a], same, ["picked"])
    table.set("picked", [end], same, ["judge"])
    table.set("scan", [end], same, ["rej"])
    table.set("judge", [end], judge_op, ["rej", "acc"])
    table.set("acc", every, same, ["acc"])
    table.set("rej", every, same, ["rej"])
    table.finish()

    m = AqfaDescription(
        alphabet=alphabet,
        classical_states=states,
        universal=frozenset({"judge"}),
        classical_initial="start",
        classical_accept=frozenset({"acc"}),
        basis=("one", "j", "jsq", "isq", "m"),
        initial="one",
        ops=table.ops,
        cdelta=table.cdelta,
    )
    logger.debug("Built USQUARE AQFA with %d classical states", len(states))
    return m


# ===== MACHINE FILE FRAGMENTS =====

def _split_key(key: str, parts: int) -> List[str]:
    pieces = key.split(KEY_SEPARATOR)
    if len(pieces) != parts:
        raise MachineSchemaError(f"Key {key!r} must have {parts} parts separated by {KEY_SEPARATOR!r}")
    return pieces


def aqfa_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> AqfaDescription:
    ops = {}
    for key, matrices in obj["ops"].items():
        state, symbol = _split_key(key, 2)
        ops[(state, key_symbol(symbol))] = superoperator_from_json(matrices)
    cdelta = {}
    for key, target in obj["cdelta"].items():
        state, symbol, outcome = _split_key(key, 3)
        if not outcome.isdigit():
            raise MachineSchemaError(f"cdelta key {key!r} must end with a 0-based outcome index")
        cdelta[(state, key_symbol(symbol), int(outcome))] = target
    return AqfaDescription(
        alphabet=alphabet,
        classical_states=tuple(obj["classical_states"]),
        universal=frozenset(obj["universal"]),
        classical_initial=obj["classical_initial"],
        classical_accept=frozenset(obj["classical_accept"]),
        basis=tuple(obj["basis"]),
        initial=obj["initial"],
        ops=ops,
        cdelta=cdelta,
    )


def aqfa_to_json(m: AqfaDescription) -> Dict[str, Any]:
    order = {state: i for i, state in enumerate(m.classical_states)}

    def ordered(subset):
        return sorted(subset, key=lambda state: (order.get(state, len(order)), state))

    return {
        "classical_states": list(m.classical_states),
        "universal": ordered(m.universal),
        "classical_initial": m.classical_initial,
        "classical_accept": ordered(m.classical_accept),
        "basis": list(m.basis),
        "initial": m.initial,
        "ops": {
            KEY_SEPARATOR.join((state, symbol_key(symbol))): superoperator_to_json(op)
            for (state, symbol), op in m.ops.items()
        },
        "cdelta": {
            KEY_SEPARATOR.join((state, symbol_key(symbol), str(k))): target
            for (state, symbol, k), target in m.cdelta.items()
        },
    }
