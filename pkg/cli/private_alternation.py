#!/usr/bin/env python3
"""
Private Alternation

Private alternating finite automata (PAFA) and their one-counter extension
(PA1CA). A state is a (common, private) pair; the existential player sees
only the common component and the public (Γ-labeled) moves made so far, so
acceptance asks for a *strategy* keyed by (common state, public history)
rather than a free choice at every node.

Halting is absorbing: a node whose common component is the accepting state
evaluates true at once and the rejecting state false at once. Any other node
that reaches depth 2n+4 is false.

The search explores the computation tree level by level. The frontier is the
set of live nodes on one level; information sets met on that level are
assigned lazily in a fixed order (common-state order, then shortlex
history), and the first accepting assignment in that order is the witness.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from cli.computation_tree import EXISTENTIAL, LEAF, UNIVERSAL, TreeNode, build_tree, evaluate_and_or
from cli.constants import COUNTER_STATUSES, COUNTER_UPDATES, KEY_SEPARATOR, STATUS_NONZERO, STATUS_ZERO
from cli.errors import MachineSchemaError, MachineValidationError
from cli.tape import Alphabet, TapeView, Verdict, check_word, key_symbol, symbol_key

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]
Move = Tuple[str, str, int]  # (common, private, counter update)


class InformationSet(NamedTuple):
    """What the existential player knows at a choice point."""

    common: str
    history: Tuple[str, ...]

    def __str__(self) -> str:
        return f"({self.common}, {'.'.join(self.history) or 'ε'})"


Strategy = Dict[InformationSet, str]


class PafaNode(NamedTuple):
    common: str
    private: str
    level: int
    history: Tuple[str, ...]
    counter: int = 0


class _PrivateMachine:
    """Accessors shared by PafaDescription and Pa1caDescription."""

    @property
    def labels(self) -> Tuple[str, ...]:
        """Γ followed by Δ; the order children are generated in."""
        return tuple(self.gamma) + tuple(self.delta_priv)

    def is_universal(self, common: str, private: str) -> bool:
        return (common, private) in self.universal

    def existential_moves(self, common: str) -> List[Tuple[str, str]]:
        row = self.delta_e.get(common, {})
        return [(label, row[label]) for label in self.labels if label in row]

    def universal_moves(self, common: str, private: str, symbol: str, status: str) -> List[Tuple[str, Move]]:
        row = self._universal_row(common, private, symbol, status)
        return [(label, row[label]) for label in self.labels if label in row]


@dataclass(frozen=True)
class PafaDescription(_PrivateMachine):
    """The 12-component private alternating automaton.

    delta_u maps (common, private) → symbol → label → (common', private').
    """

    alphabet: Alphabet
    common_states: Tuple[str, ...]
    private_states: Tuple[str, ...]
    universal: FrozenSet[Pair]
    gamma: Tuple[str, ...]
    delta_priv: Tuple[str, ...]
    initial: Pair
    accept: str
    reject: str
    delta_e: Dict[str, Dict[str, str]]
    delta_u: Dict[Pair, Dict[str, Dict[str, Pair]]]

    has_counter = False

    def _universal_row(self, common, private, symbol, status) -> Dict[str, Move]:
        row = self.delta_u.get((common, private), {}).get(symbol, {})
        return {label: (c, p, 0) for label, (c, p) in row.items()}


@dataclass(frozen=True)
class Pa1caDescription(_PrivateMachine):
    """PAFA whose universal transitions also see and update a counter.

    delta_u maps (common, private) → symbol → status → label →
    (common', private', update). δ_E never sees the counter.
    """

    alphabet: Alphabet
    common_states: Tuple[str, ...]
    private_states: Tuple[str, ...]
    universal: FrozenSet[Pair]
    gamma: Tuple[str, ...]
    delta_priv: Tuple[str, ...]
    initial: Pair
    accept: str
    reject: str
    delta_e: Dict[str, Dict[str, str]]
    delta_u: Dict[Pair, Dict[str, Dict[str, Dict[str, Move]]]]

    has_counter = True

    def _universal_row(self, common, private, symbol, status) -> Dict[str, Move]:
        return self.delta_u.get((common, private), {}).get(symbol, {}).get(status, {})


def status_dependent_entries(m: Pa1caDescription) -> List[Tuple[str, str, str]]:
    """(common, private, symbol) entries whose moves differ between zero and nonzero."""
    entries = []
    for (common, private), row in m.delta_u.items():
        for symbol, by_status in row.items():
            if by_status.get(STATUS_ZERO) != by_status.get(STATUS_NONZERO):
                entries.append((common, private, symbol))
    return entries


# ===== VALIDATION =====

def _private_violations(m) -> List[str]:
    violations = []
    commons, privates = list(m.common_states), list(m.private_states)
    gamma, delta = list(m.gamma), list(m.delta_priv)

    for name, states in (("common", commons), ("private", privates)):
        if not states:
            violations.append(f"{name} state set must not be empty")
        if len(set(states)) != len(states):
            violations.append(f"{name} state names must be distinct")
        for state in states:
            if KEY_SEPARATOR in state:
                violations.append(f"{name} state {state!r} contains the key separator {KEY_SEPARATOR!r}")
    if len(gamma) < 2 or len(set(gamma)) != len(gamma):
        violations.append("Γ needs at least two distinct labels")
    if len(delta) < 2 or len(set(delta)) != len(delta):
        violations.append("Δ needs at least two distinct labels")
    if set(gamma) & set(delta):
        violations.append(f"Γ and Δ must be disjoint (shared: {sorted(set(gamma) & set(delta))})")

    known_c, known_p = set(commons), set(privates)
    if m.accept not in known_c:
        violations.append(f"accepting common state {m.accept!r} is not declared")
    if m.reject not in known_c:
        violations.append(f"rejecting common state {m.reject!r} is not declared")
    if m.accept == m.reject:
        violations.append("accepting and rejecting common states must differ (q_a ≠ q_r)")
    if m.initial[0] not in known_c or m.initial[1] not in known_p:
        violations.append(f"initial pair {tuple(m.initial)!r} is not in S_c × S_p")
    for common, private in sorted(m.universal):
        if common not in known_c or private not in known_p:
            violations.append(f"universal pair ({common}, {private}) is not in S_c × S_p")

    halting = {m.accept, m.reject}
    needs_choice = {c for c in commons if c not in halting and any((c, p) not in m.universal for p in privates)}
    for common in commons:
        row = m.delta_e.get(common)
        if not row:
            if common in needs_choice:
                violations.append(f"δ_E({common}) is undefined but {common} has existential pairs")
            continue
        if len(row) != 1 and set(row) != set(gamma):
            violations.append(
                f"δ_E({common}) has {len(row)} successors; it needs 1 or exactly |Γ| = {len(gamma)} "
                f"with distinct Γ-labels"
            )
        for label, target in row.items():
            if label not in gamma:
                violations.append(f"δ_E({common}) uses label {label!r} outside Γ")
            if target not in known_c:
                violations.append(f"δ_E({common}) targets undeclared common state {target!r}")
    for common in sorted(set(m.delta_e) - known_c):
        violations.append(f"δ_E mentions undeclared common state {common!r}")

    statuses = COUNTER_STATUSES if m.has_counter else (STATUS_ZERO,)
    all_labels = set(gamma) | set(delta)
    symbols = m.alphabet.with_end()
    for pair in sorted(set(m.delta_u) - set(m.universal)):
        violations.append(f"δ_U defined for ({pair[0]}, {pair[1]}), which is not universal")
    for common, private in sorted(m.universal):
        if common in halting:
            continue
        for symbol in symbols:
            for status in statuses:
                where = f"δ_U({common}, {private}, {symbol_key(symbol)}" + (f", {status})" if m.has_counter else ")")
                row = m._universal_row(common, private, symbol, status)
                if not row:
                    violations.append(f"{where} is undefined")
                    continue
                if len(row) != 1 and set(row) != all_labels:
                    violations.append(
                        f"{where} has {len(row)} successors; it needs 1 or exactly |Γ ∪ Δ| = "
                        f"{len(all_labels)} with distinct labels"
                    )
                for label in row:
                    if label not in all_labels:
                        violations.append(f"{where} uses label {label!r} outside Γ ∪ Δ")
                for label, (target_c, target_p, update) in row.items():
                    if target_c not in known_c or target_p not in known_p:
                        violations.append(f"{where} targets undeclared pair ({target_c}, {target_p})")
                    if update not in COUNTER_UPDATES:
                        violations.append(f"{where}: counter update {update!r} not in {{-1, 0, 1}}")
                    if label in gamma and target_p != private:
                        violations.append(f"{where}: Γ-labeled move {label!r} changes the private component")
    return violations


def validate_pafa(m: PafaDescription) -> List[str]:
    return _private_violations(m)


def validate_pa1ca(m: Pa1caDescription) -> List[str]:
    return _private_violations(m)


# ===== STRATEGY SEARCH =====

def _common_prefix_length(histories: List[Tuple[str, ...]]) -> int:
    if not histories:
        return 0
    shortest = min(histories, key=len)
    for index, label in enumerate(shortest):
        if any(history[index] != label for history in histories):
            return index
    return len(shortest)


class PrivateAlternationSearch:
    """Decides PAFA/PA1CA acceptance on one word and produces witness strategies."""

    def __init__(self, machine, word: str):
        violations = _private_violations(machine)
        if violations:
            raise MachineValidationError(violations)
        check_word(machine.alphabet, word)
        self.machine = machine
        self.tape = TapeView(word)
        self.depth = self.tape.depth
        self.public = frozenset(machine.gamma)
        self.common_order = {c: index for index, c in enumerate(machine.common_states)}
        self.gamma_order = {label: index for index, label in enumerate(machine.gamma)}
        self.relaxed: Dict[Tuple[str, str, int, int], bool] = {}
        self.dead: set = set()
        self.frontiers = 0

    def root(self) -> PafaNode:
        common, private = self.machine.initial
        return PafaNode(common, private, 0, ())

    def halted(self, node: PafaNode) -> Optional[bool]:
        """True/False for absorbing or exhausted nodes, None for live ones."""
        if node.common == self.machine.accept:
            return True
        if node.common == self.machine.reject or node.level == self.depth:
            return False
        return None

    def is_choice(self, node: PafaNode) -> bool:
        return (not self.machine.is_universal(node.common, node.private)
                and len(self.machine.existential_moves(node.common)) > 1)

    def existential_children(self, node: PafaNode) -> List[Tuple[str, PafaNode]]:
        moves = self.machine.existential_moves(node.common)
        branching = len(moves) > 1
        return [
            (label, PafaNode(target, node.private, node.level + 1,
                             node.history + (label,) if branching else node.history, node.counter))
            for label, target in moves
        ]

    def universal_children(self, node: PafaNode) -> List[Tuple[str, PafaNode]]:
        symbol = self.tape.symbol_at(node.level)
        status = STATUS_ZERO if node.counter == 0 else STATUS_NONZERO
        moves = self.machine.universal_moves(node.common, node.private, symbol, status)
        branching = len(moves) > 1
        children = []
        for label, (common, private, update) in moves:
            public = label in self.public
            if public and private != node.private:
                raise MachineValidationError(
                    [f"Γ-labeled move {label!r} from ({node.common}, {node.private}) changes the private component"]
                )
            history = node.history + (label,) if branching and public else node.history
            children.append((label, PafaNode(common, private, node.level + 1, history, node.counter + update)))
        return children

    def children(self, node: PafaNode, strategy: Optional[Strategy] = None) -> List[Tuple[str, PafaNode]]:
        """Successors of a live node; with a strategy, choice nodes keep only the chosen child."""
        if self.machine.is_universal(node.common, node.private):
            return self.universal_children(node)
        options = self.existential_children(node)
        if strategy is None or len(options) == 1:
            return options
        chosen = strategy.get(InformationSet(node.common, node.history))
        return [(label, child) for label, child in options if label == chosen]

    def relaxed_value(self, node: PafaNode) -> bool:
        """Value when existential nodes may choose freely (an upper bound)."""
        def expand(current: PafaNode):
            verdict = self.halted(current)
            if verdict is not None:
                return verdict
            return (self.machine.is_universal(current.common, current.private),
                    (child for _, child in self.children(current)))

        return evaluate_and_or(node, expand, self.relaxed,
                               key=lambda n: (n.common, n.private, n.level, n.counter))

    def _settle(self, nodes: Iterable[PafaNode]) -> Optional[FrozenSet[PafaNode]]:
        """Drop accepted nodes; None when any node is lost even under free choice."""
        live = set()
        for node in nodes:
            verdict = self.halted(node)
            if verdict is True:
                continue
            if verdict is False or not self.relaxed_value(node):
                return None
            live.add(node)
        return frozenset(live)

    def _information_set_order(self, info: InformationSet):
        return (self.common_order[info.common], len(info.history),
                tuple(self.gamma_order[label] for label in info.history))

    def _state_key(self, frontier: FrozenSet[PafaNode], assignment: Strategy):
        histories = {node.history for node in frontier}
        cut = _common_prefix_length(list(histories))
        nodes = frozenset((n.common, n.private, n.history[cut:], n.counter) for n in frontier)
        relevant = frozenset(
            (info.common, info.history[cut:], label)
            for info, label in assignment.items()
            if any(info.history[:len(history)] == history for history in histories)
        )
        level = next(iter(frontier)).level
        return level, nodes, relevant

    def _trials(self, frontier: FrozenSet[PafaNode], assignment: Strategy) -> Iterator[Tuple[FrozenSet[PafaNode], Strategy]]:
        """(next frontier, extended assignment) for each surviving answer to the pending information sets."""
        pending = sorted(
            {InformationSet(n.common, n.history) for n in frontier if self.is_choice(n)} - set(assignment),
            key=self._information_set_order,
        )
        for labels in itertools.product(self.machine.gamma, repeat=len(pending)):
            trial = dict(assignment)
            trial.update(zip(pending, labels))
            successors = self._settle(
                child for node in frontier for _, child in self.children(node, trial)
            )
            if successors is not None:
                yield successors, trial

    def _open(self, frontier: FrozenSet[PafaNode], assignment: Strategy):
        self.frontiers += 1
        key = self._state_key(frontier, assignment)
        if key in self.dead:
            return None
        return key, self._trials(frontier, assignment)

    def _expand(self, frontier: FrozenSet[PafaNode], assignment: Strategy) -> Optional[Strategy]:
        """Depth-first over levels with an explicit stack of open frontiers."""
        if not frontier:
            return assignment
        opened = self._open(frontier, assignment)
        stack = [] if opened is None else [opened]
        while stack:
            key, trials = stack[-1]
            for successors, trial in trials:
                if not successors:
                    return trial
                opened = self._open(successors, trial)
                if opened is not None:
                    stack.append(opened)
                    break
            else:
                self.dead.add(key)
                stack.pop()
        return None

    def search(self) -> Optional[Strategy]:
        """The first accepting strategy in canonical order, or None."""
        start = self._settle([self.root()])
        strategy = None if start is None else self._expand(start, {})
        logger.debug(
            "private alternation on %r: %s after %d frontiers (%d relaxed, %d dead)",
            self.tape.word, "strategy found" if strategy is not None else "no strategy",
            self.frontiers, len(self.relaxed), len(self.dead),
        )
        return strategy


def accepting_strategy(m, w: str) -> Optional[Strategy]:
    """A witness strategy defined exactly on the information sets it reaches, or None."""
    return PrivateAlternationSearch(m, w).search()


def pafa_accepts(m: PafaDescription, w: str) -> Verdict:
    return Verdict.of(accepting_strategy(m, w) is not None)


def pa1ca_accepts(m: Pa1caDescription, w: str) -> Verdict:
    """As pafa_accepts; the counter starts at 0 and never enters a strategy key."""
    return Verdict.of(accepting_strategy(m, w) is not None)


# ===== STRATEGY CHECKING =====

def check_strategy(m, w: str, strategy: Strategy) -> Tuple[Verdict, List[str]]:
    """Evaluate only the subtree a strategy induces.

    Returns the verdict and a list of diagnostics; a reached information set
    the strategy leaves undefined (or answers with a label that is not
    available) makes that branch false.
    """
    search = PrivateAlternationSearch(m, w)
    diagnostics: List[str] = []
    memo: Dict[PafaNode, bool] = {}

    def expand(node: PafaNode):
        verdict = search.halted(node)
        if verdict is not None:
            return verdict
        if search.is_choice(node):
            info = InformationSet(node.common, node.history)
            label = strategy.get(info)
            options = dict(search.existential_children(node))
            if label is None:
                message = f"strategy undefined at information set (common={info.common!r}, history={list(info.history)})"
            elif label not in options:
                message = f"strategy plays {label!r} at (common={info.common!r}, history={list(info.history)}), not a Γ move there"
            else:
                message = None
            if message is not None:
                if message not in diagnostics:
                    diagnostics.append(message)
                    logger.warning("⚠️  %s", message)
                return False
            return False, [options[label]]
        return m.is_universal(node.common, node.private), (child for _, child in search.children(node))

    verdict = Verdict.of(evaluate_and_or(search.root(), expand, memo))
    return verdict, diagnostics


def verify_strategy(m, w: str, strategy: Strategy) -> Verdict:
    return check_strategy(m, w, strategy)[0]


def pafa_tree(m, w: str, strategy: Optional[Strategy] = None) -> TreeNode:
    """The strategy-induced subtree (the witness strategy when none is given)."""
    search = PrivateAlternationSearch(m, w)
    if strategy is None:
        strategy = search.search() or {}

    def expand(node: PafaNode):
        label = f"({node.common}, {node.private}) h={'.'.join(node.history) or 'ε'}"
        if m.has_counter:
            label += f" c={node.counter}"
        verdict = search.halted(node)
        if verdict is not None:
            return TreeNode(node.level, label, LEAF, verdict)
        label += f" [{search.tape.symbol_at(node.level)}]"
        children = search.children(node, strategy)
        if search.machine.is_universal(node.common, node.private):
            return node.level, label, UNIVERSAL, children
        if not children:
            return TreeNode(node.level, label + " (no move)", LEAF, False)
        return node.level, label, EXISTENTIAL, children

    return build_tree(search.root(), expand)


# ===== MACHINE FILE FRAGMENTS =====

def _split_pair(key: str) -> Pair:
    parts = key.split(KEY_SEPARATOR)
    if len(parts) != 2:
        raise MachineSchemaError(f"deltaU key {key!r} must look like \"common{KEY_SEPARATOR}private\"")
    return parts[0], parts[1]


def _is_status_split(entry: Dict[str, Any]) -> bool:
    return set(entry) == set(COUNTER_STATUSES) and all(isinstance(v, dict) for v in entry.values())


def _moves_from_json(entry: Dict[str, Any], with_counter: bool) -> Dict[str, Any]:
    moves = {}
    for label, target in entry.items():
        if with_counter:
            moves[label] = (target[0], target[1], target[2])
        else:
            moves[label] = (target[0], target[1])
    return moves


def _private_from_json(alphabet: Alphabet, obj: Dict[str, Any], with_counter: bool):
    delta_u: Dict[Pair, Dict[str, Any]] = {}
    for key, row in obj["deltaU"].items():
        table: Dict[str, Any] = {}
        for symbol_name, entry in row.items():
            symbol = key_symbol(symbol_name)
            split = _is_status_split(entry)
            if not with_counter:
                if split:
                    raise MachineSchemaError(f"pafa transition {key} on {symbol_name} cannot test a counter status")
                table[symbol] = _moves_from_json(entry, False)
            elif split:
                table[symbol] = {status: _moves_from_json(entry[status], True) for status in COUNTER_STATUSES}
            else:
                table[symbol] = {status: _moves_from_json(entry, True) for status in COUNTER_STATUSES}
        delta_u[_split_pair(key)] = table
    description = Pa1caDescription if with_counter else PafaDescription
    return description(
        alphabet=alphabet,
        common_states=tuple(obj["common_states"]),
        private_states=tuple(obj["private_states"]),
        universal=frozenset((c, p) for c, p in obj["universal"]),
        gamma=tuple(obj["gamma"]),
        delta_priv=tuple(obj["delta_priv"]),
        initial=(obj["initial"][0], obj["initial"][1]),
        accept=obj["accept"],
        reject=obj["reject"],
        delta_e={common: dict(row) for common, row in obj["deltaE"].items()},
        delta_u=delta_u,
    )


def pafa_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> PafaDescription:
    return _private_from_json(alphabet, obj, with_counter=False)


def pa1ca_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> Pa1caDescription:
    return _private_from_json(alphabet, obj, with_counter=True)


def _private_to_json(m) -> Dict[str, Any]:
    common_order = {c: i for i, c in enumerate(m.common_states)}
    private_order = {p: i for i, p in enumerate(m.private_states)}

    def pair_key(pair: Pair):
        return common_order.get(pair[0], len(common_order)), private_order.get(pair[1], len(private_order)), pair

    def moves_to_json(moves: Dict[str, Any]) -> Dict[str, List[Any]]:
        return {label: list(target) for label, target in moves.items()}

    delta_u = {}
    for pair in sorted(m.delta_u, key=pair_key):
        row = {}
        for symbol, entry in m.delta_u[pair].items():
            if not m.has_counter:
                row[symbol_key(symbol)] = moves_to_json(entry)
            elif entry.get(STATUS_ZERO) == entry.get(STATUS_NONZERO):
                row[symbol_key(symbol)] = moves_to_json(entry.get(STATUS_ZERO, {}))
            else:
                row[symbol_key(symbol)] = {status: moves_to_json(entry.get(status, {})) for status in COUNTER_STATUSES}
        delta_u[KEY_SEPARATOR.join(pair)] = row
    return {
        "common_states": list(m.common_states),
        "private_states": list(m.private_states),
        "universal": [list(pair) for pair in sorted(m.universal, key=pair_key)],
        "gamma": list(m.gamma),
        "delta_priv": list(m.delta_priv),
        "initial": list(m.initial),
        "accept": m.accept,
        "reject": m.reject,
        "deltaE": {common: dict(row) for common, row in m.delta_e.items()},
        "deltaU": delta_u,
    }


def pafa_to_json(m: PafaDescription) -> Dict[str, Any]:
    return _private_to_json(m)


def pa1ca_to_json(m: Pa1caDescription) -> Dict[str, Any]:
    return _private_to_json(m)
