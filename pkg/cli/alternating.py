#!/usr/bin/env python3
"""
Realtime Alternating Automata

Alternating finite automata (AFA) and alternating one-counter automata
(A1CA). Both read ¢w¢ spending exactly two transition steps on every tape
symbol; acceptance is the AND-OR value of the depth-2n+4 computation tree,
whose leaves are true iff they are in the accepting state.

Machine file fragments (kind "afa" / "a1ca"):
    {"states": [...], "universal": [...], "initial": s, "accepting": s,
     "delta": {state: {symbol or "@end": [targets]}}}
A1CA targets are [state, update] pairs grouped by counter status:
    {symbol: {"zero": [[s, 1]], "nonzero": [[s, -1]]}}
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

from cli.computation_tree import EXISTENTIAL, LEAF, UNIVERSAL, TreeNode, build_tree, evaluate_and_or
from cli.constants import COUNTER_STATUSES, COUNTER_UPDATES, STATUS_NONZERO, STATUS_ZERO
from cli.tape import (
    Alphabet,
    TapeView,
    Verdict,
    check_word,
    enumerate_words,
    key_symbol,
    symbol_key,
)

logger = logging.getLogger(__name__)

Targets = Tuple[str, ...]
CounterTargets = Tuple[Tuple[str, int], ...]


@dataclass(frozen=True)
class AfaDescription:
    """S, the ∃/∀ partition, δ: S × Σ̃ → set of S, s1 and sa."""

    alphabet: Alphabet
    states: Tuple[str, ...]
    universal: FrozenSet[str]
    initial: str
    accepting: str
    delta: Dict[str, Dict[str, Targets]]

    def successors(self, state: str, symbol: str) -> Targets:
        return self.delta.get(state, {}).get(symbol, ())


@dataclass(frozen=True)
class A1caDescription:
    """As AfaDescription with δ: S × Σ̃ × {zero, nonzero} → set of (S, update)."""

    alphabet: Alphabet
    states: Tuple[str, ...]
    universal: FrozenSet[str]
    initial: str
    accepting: str
    delta: Dict[str, Dict[str, Dict[str, CounterTargets]]]

    def successors(self, state: str, symbol: str, status: str) -> CounterTargets:
        return self.delta.get(state, {}).get(symbol, {}).get(status, ())


@dataclass(frozen=True)
class AltConfiguration:
    state: str
    level: int
    counter: int = 0

    @property
    def status(self) -> str:
        return STATUS_ZERO if self.counter == 0 else STATUS_NONZERO


def counter_status(counter: int) -> str:
    return STATUS_ZERO if counter == 0 else STATUS_NONZERO


# ===== VALIDATION =====

def _common_violations(m) -> List[str]:
    violations = []
    states = list(m.states)
    if not states:
        violations.append("state set must not be empty")
    if len(set(states)) != len(states):
        violations.append("state names must be distinct")
    known = set(states)
    for state in sorted(set(m.universal) - known):
        violations.append(f"universal state {state!r} is not declared")
    if m.initial not in known:
        violations.append(f"initial state {m.initial!r} is not declared")
    if m.accepting not in known:
        violations.append(f"accepting state {m.accepting!r} is not declared")
    symbols = set(m.alphabet.with_end())
    for state, row in m.delta.items():
        if state not in known:
            violations.append(f"transition table mentions undeclared state {state!r}")
        for symbol in row:
            if symbol not in symbols:
                violations.append(f"δ({state}, {symbol!r}): symbol not in Σ ∪ {{¢}}")
    return violations


def validate_afa(m: AfaDescription) -> List[str]:
    violations = _common_violations(m)
    known = set(m.states)
    for state, row in m.delta.items():
        for symbol, targets in row.items():
            for target in targets:
                if target not in known:
                    violations.append(f"δ({state}, {symbol_key(symbol)}) targets undeclared state {target!r}")
            if len(set(targets)) != len(targets):
                violations.append(f"δ({state}, {symbol_key(symbol)}) lists a successor twice")
    return violations


def validate_a1ca(m: A1caDescription) -> List[str]:
    violations = _common_violations(m)
    known = set(m.states)
    for state, row in m.delta.items():
        for symbol, by_status in row.items():
            for status, targets in by_status.items():
                where = f"δ({state}, {symbol_key(symbol)}, {status})"
                if status not in COUNTER_STATUSES:
                    violations.append(f"{where}: counter status must be 'zero' or 'nonzero'")
                for target, update in targets:
                    if target not in known:
                        violations.append(f"{where} targets undeclared state {target!r}")
                    if update not in COUNTER_UPDATES:
                        violations.append(f"{where}: counter update {update!r} not in {{-1, 0, 1}}")
                if len(set(targets)) != len(targets):
                    violations.append(f"{where} lists a successor twice")
    return violations


# ===== EVALUATION =====

class AlternationEvaluator:
    """Memoized AND-OR evaluation over (state, level, counter).

    An AFA is evaluated as an A1CA whose counter never moves, so the memo
    key degenerates to (state, level).
    """

    def __init__(self, machine, word: str):
        check_word(machine.alphabet, word)
        self.machine = machine
        self.tape = TapeView(word)
        self.has_counter = isinstance(machine, A1caDescription)
        self.memo: Dict[Tuple[str, int, int], bool] = {}

    def moves(self, state: str, level: int, counter: int) -> List[Tuple[str, str, int]]:
        """(edge label, successor state, successor counter) for one step."""
        symbol = self.tape.symbol_at(level)
        if not self.has_counter:
            return [(target, target, counter) for target in self.machine.successors(state, symbol)]
        moves = []
        for target, update in self.machine.successors(state, symbol, counter_status(counter)):
            moves.append((f"{target} ({update:+d})", target, counter + update))
        return moves

    def _expand(self, key: Tuple[str, int, int]):
        state, level, counter = key
        if level == self.tape.depth:
            self.memo[key] = state == self.machine.accepting
            return self.memo[key]
        children = [(target, level + 1, next_counter) for _, target, next_counter in self.moves(state, level, counter)]
        return state in self.machine.universal, children

    def value(self, state: str, level: int = 0, counter: int = 0) -> bool:
        return evaluate_and_or((state, level, counter), self._expand, self.memo)

    def configurations(self) -> List[AltConfiguration]:
        """Every configuration the memoized evaluation has visited."""
        return [AltConfiguration(state, level, counter) for state, level, counter in self.memo]

    def _tree_node(self, key: Tuple[str, int, int]):
        state, level, counter = key
        label = f"{state} c={counter}" if self.has_counter else state
        if level == self.tape.depth:
            return TreeNode(level, label, LEAF, state == self.machine.accepting)
        children = [(edge, (target, level + 1, next_counter))
                    for edge, target, next_counter in self.moves(state, level, counter)]
        connective = UNIVERSAL if state in self.machine.universal else EXISTENTIAL
        return level, f"{label} [{self.tape.symbol_at(level)}]", connective, children

    def tree(self, state: str, level: int = 0, counter: int = 0) -> TreeNode:
        """Materialize the subtree rooted at a configuration (no sharing)."""
        return build_tree((state, level, counter), self._tree_node)


def afa_accepts(m: AfaDescription, w: str) -> Verdict:
    """AND-OR evaluation of the AFA computation tree on ¢w¢."""
    evaluator = AlternationEvaluator(m, w)
    verdict = Verdict.of(evaluator.value(m.initial))
    logger.debug("afa %r: %s (%d configurations)", w, verdict, len(evaluator.memo))
    return verdict


def a1ca_accepts(m: A1caDescription, w: str) -> Verdict:
    """AND-OR evaluation over (state, counter) configurations; counter starts at 0."""
    evaluator = AlternationEvaluator(m, w)
    verdict = Verdict.of(evaluator.value(m.initial))
    logger.debug("a1ca %r: %s (%d configurations)", w, verdict, len(evaluator.memo))
    return verdict


def alt_tree(m, w: str) -> TreeNode:
    """The full evaluated computation tree of an AFA or A1CA."""
    return AlternationEvaluator(m, w).tree(m.initial)


def bounded_emptiness(accepts: Callable[[str], Verdict], alphabet: Alphabet,
                      max_len: int) -> Optional[str]:
    """First accepted word of length ≤ max_len in shortlex order, or None.

    A None result says nothing about longer words.
    """
    for word in enumerate_words(alphabet, max_len):
        if accepts(word).accepted:
            return word
    return None


# ===== MACHINE FILE FRAGMENTS =====

def _ordered(states: Tuple[str, ...], subset) -> List[str]:
    order = {state: index for index, state in enumerate(states)}
    return sorted(subset, key=lambda state: (order.get(state, len(order)), state))


def _row_keys(alphabet: Alphabet, states: Tuple[str, ...], table: Dict[str, Any]):
    """Declared states first, then any undeclared ones (kept so validation can report them)."""
    for state in list(states) + [s for s in table if s not in states]:
        row = table.get(state, {})
        keys = [symbol_key(symbol) for symbol in alphabet.with_end()]
        keys += [key for key in row if key_symbol(key) not in alphabet.with_end()]
        yield state, row, keys


def afa_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> AfaDescription:
    states = tuple(obj["states"])
    delta: Dict[str, Dict[str, Targets]] = {}
    for state, row, keys in _row_keys(alphabet, states, obj["delta"]):
        delta[state] = {key_symbol(key): tuple(_ordered(states, set(row.get(key, [])))) for key in keys}
    return AfaDescription(
        alphabet=alphabet,
        states=states,
        universal=frozenset(obj["universal"]),
        initial=obj["initial"],
        accepting=obj["accepting"],
        delta=delta,
    )


def afa_to_json(m: AfaDescription) -> Dict[str, Any]:
    return {
        "states": list(m.states),
        "universal": _ordered(m.states, m.universal),
        "initial": m.initial,
        "accepting": m.accepting,
        "delta": {
            state: {symbol_key(symbol): _ordered(m.states, set(targets)) for symbol, targets in row.items()}
            for state, row in m.delta.items()
        },
    }


def _ordered_pairs(states: Tuple[str, ...], pairs) -> List[Tuple[str, int]]:
    order = {state: index for index, state in enumerate(states)}
    return sorted(set(pairs), key=lambda pair: (order.get(pair[0], len(order)), pair[0], pair[1]))


def a1ca_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> A1caDescription:
    states = tuple(obj["states"])
    delta: Dict[str, Dict[str, Dict[str, CounterTargets]]] = {}
    for state, row, keys in _row_keys(alphabet, states, obj["delta"]):
        delta[state] = {}
        for key in keys:
            by_status = row.get(key, {})
            statuses = list(COUNTER_STATUSES) + [s for s in by_status if s not in COUNTER_STATUSES]
            delta[state][key_symbol(key)] = {
                status: tuple(_ordered_pairs(states, [(t, u) for t, u in by_status.get(status, [])]))
                for status in statuses
            }
    return A1caDescription(
        alphabet=alphabet,
        states=states,
        universal=frozenset(obj["universal"]),
        initial=obj["initial"],
        accepting=obj["accepting"],
        delta=delta,
    )


def a1ca_to_json(m: A1caDescription) -> Dict[str, Any]:
    return {
        "states": list(m.states),
        "universal": _ordered(m.states, m.universal),
        "initial": m.initial,
        "accepting": m.accepting,
        "delta": {
            state: {
                symbol_key(symbol): {
                    status: [[target, update] for target, update in _ordered_pairs(m.states, targets)]
                    for status, targets in by_status.items()
                }
                for symbol, by_status in row.items()
            }
            for state, row in m.delta.items()
        },
    }
