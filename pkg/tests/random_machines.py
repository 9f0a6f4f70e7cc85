"""
Seeded random machine generators and brute-force oracles shared by the tests.

Quantum machines use exact rational unitaries built from Pythagorean
rotations, permutations and ±1/±i phases, so every amplitude stays in Q(i).
"""

import itertools
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

sys.path.insert(0, str(Path(__file__).parent.parent))

from cli.alternating import A1caDescription, AfaDescription
from cli.constants import (
    BLANK_SYMBOL,
    COUNTER_STATUSES,
    END_MARKER,
    MOVE_LEFT,
    MOVE_RIGHT,
    START_SYMBOL,
    STATUS_NONZERO,
    STATUS_ZERO,
)
from cli.exact import GaussianRational, identity, matmul, scale, zeros
from cli.private_alternation import Pa1caDescription, PafaDescription
from cli.quantum import QfaDescription, Superoperator, apply_superoperator
from cli.tape import Alphabet, TapeView
from cli.turing_compiler import TmDescription, tm_check_assumptions, tm_run

ROTATIONS = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)), (Fraction(8, 17), Fraction(15, 17))]
PHASES = [GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)]


# ===== CLASSICAL ALTERNATION =====

def random_afa(rng: random.Random, max_states: int = 3, max_symbols: int = 2) -> AfaDescription:
    states = tuple(f"s{i}" for i in range(rng.randint(1, max_states)))
    alphabet = Alphabet(tuple("ab"[:rng.randint(1, max_symbols)]))
    delta = {
        state: {symbol: tuple(t for t in states if rng.random() < 0.45) for symbol in alphabet.with_end()}
        for state in states
    }
    return AfaDescription(
        alphabet=alphabet,
        states=states,
        universal=frozenset(s for s in states if rng.random() < 0.5),
        initial=rng.choice(states),
        accepting=rng.choice(states),
        delta=delta,
    )


def random_a1ca(rng: random.Random, max_states: int = 3) -> A1caDescription:
    states = tuple(f"s{i}" for i in range(rng.randint(1, max_states)))
    alphabet = Alphabet(("a",))
    delta = {}
    for state in states:
        delta[state] = {}
        for symbol in alphabet.with_end():
            delta[state][symbol] = {
                status: tuple(sorted({(rng.choice(states), rng.choice((-1, 0, 1)))
                                      for _ in range(rng.randint(0, 2))}))
                for status in COUNTER_STATUSES
            }
    return A1caDescription(
        alphabet=alphabet,
        states=states,
        universal=frozenset(s for s in states if rng.random() < 0.5),
        initial=rng.choice(states),
        accepting=rng.choice(states),
        delta=delta,
    )


def naive_alternation_value(m, word: str, state: Optional[str] = None, level: int = 0, counter: int = 0) -> bool:
    """Plain recursion over the full tree, no memo."""
    tape = TapeView(word)
    state = m.initial if state is None else state
    if level == tape.depth:
        return state == m.accepting
    symbol = tape.symbol_at(level)
    if isinstance(m, A1caDescription):
        status = STATUS_ZERO if counter == 0 else STATUS_NONZERO
        moves = [(t, counter + u) for t, u in m.delta.get(state, {}).get(symbol, {}).get(status, ())]
    else:
        moves = [(t, counter) for t in m.delta.get(state, {}).get(symbol, ())]
    values = [naive_alternation_value(m, word, t, level + 1, c) for t, c in moves]
    return all(values) if state in m.universal else any(values)


# ===== PRIVATE ALTERNATION =====

TINY_COMMONS = ("c0", "c1", "acc", "rej")
TINY_PRIVATES = ("p0", "p1")
TINY_GAMMA = ("g0", "g1")
TINY_DELTA = ("d0", "d1")


def random_pafa(rng: random.Random, universal_rate: float = 0.5) -> PafaDescription:
    """|S_c| = 2 plus acc/rej, |S_p| = 2, one symbol."""
    live = TINY_COMMONS[:2]
    universal = frozenset((c, p) for c in live for p in TINY_PRIVATES if rng.random() < universal_rate)
    delta_e = {}
    for common in live:
        if rng.random() < 0.3:
            delta_e[common] = {"g0": rng.choice(TINY_COMMONS)}
        else:
            delta_e[common] = {label: rng.choice(TINY_COMMONS) for label in TINY_GAMMA}
    delta_u: Dict[Tuple[str, str], Dict[str, Dict[str, Tuple[str, str]]]] = {}
    for common, private in sorted(universal):
        delta_u[(common, private)] = {}
        for symbol in ("a", END_MARKER):
            if rng.random() < 0.4:
                moves = {"d0": (rng.choice(TINY_COMMONS), rng.choice(TINY_PRIVATES))}
            else:
                moves = {label: (rng.choice(TINY_COMMONS), private) for label in TINY_GAMMA}
                moves.update({label: (rng.choice(TINY_COMMONS), rng.choice(TINY_PRIVATES)) for label in TINY_DELTA})
            delta_u[(common, private)][symbol] = moves
    return PafaDescription(
        alphabet=Alphabet(("a",)),
        common_states=TINY_COMMONS,
        private_states=TINY_PRIVATES,
        universal=universal,
        gamma=TINY_GAMMA,
        delta_priv=TINY_DELTA,
        initial=(rng.choice(live), rng.choice(TINY_PRIVATES)),
        accept="acc",
        reject="rej",
        delta_e=delta_e,
        delta_u=delta_u,
    )


def random_pa1ca(rng: random.Random, universal_rate: float = 0.5) -> Pa1caDescription:
    """As random_pafa, with status-split universal moves carrying counter updates."""
    base = random_pafa(rng, universal_rate)
    delta_u: Dict[Tuple[str, str], Dict[str, Dict[str, Dict[str, Tuple[str, str, int]]]]] = {}
    for pair, row in base.delta_u.items():
        delta_u[pair] = {}
        for symbol, moves in row.items():
            by_status = {}
            for status in COUNTER_STATUSES:
                by_status[status] = {
                    label: (common, private, rng.choice((-1, 0, 1))) for label, (common, private) in moves.items()
                }
            if rng.random() < 0.5:
                by_status[STATUS_NONZERO] = dict(by_status[STATUS_ZERO])
            delta_u[pair][symbol] = by_status
    return Pa1caDescription(
        alphabet=base.alphabet,
        common_states=base.common_states,
        private_states=base.private_states,
        universal=base.universal,
        gamma=base.gamma,
        delta_priv=base.delta_priv,
        initial=base.initial,
        accept=base.accept,
        reject=base.reject,
        delta_e=base.delta_e,
        delta_u=delta_u,
    )


def relabel_privates(m: PafaDescription, names: Dict[str, str],
                     labels: Optional[Dict[str, str]] = None) -> PafaDescription:
    """The same machine with private states (and optionally Δ labels) renamed."""
    labels = labels or {}

    def label_name(label: str) -> str:
        return labels.get(label, label)

    return PafaDescription(
        alphabet=m.alphabet,
        common_states=m.common_states,
        private_states=tuple(names[p] for p in m.private_states),
        universal=frozenset((c, names[p]) for c, p in m.universal),
        gamma=m.gamma,
        delta_priv=tuple(label_name(label) for label in m.delta_priv),
        initial=(m.initial[0], names[m.initial[1]]),
        accept=m.accept,
        reject=m.reject,
        delta_e=m.delta_e,
        delta_u={
            (c, names[p]): {
                symbol: {label_name(label): (tc, names[tp]) for label, (tc, tp) in moves.items()}
                for symbol, moves in row.items()
            }
            for (c, p), row in m.delta_u.items()
        },
    )


# (common, private, level, public history, counter)
GameNode = Tuple[str, str, int, Tuple[str, ...], int]


def _game_moves(m, tape: TapeView, node: GameNode):
    """A halting verdict, or ("all" | "any" | "choice", [(label, child), ...])."""
    common, private, level, history, counter = node
    if common == m.accept:
        return True
    if common == m.reject or level == tape.depth:
        return False
    if (common, private) in m.universal:
        row = m.delta_u.get((common, private), {}).get(tape.symbol_at(level), {})
        if m.has_counter:
            moves = list(row.get(STATUS_ZERO if counter == 0 else STATUS_NONZERO, {}).items())
        else:
            moves = [(label, (c, p, 0)) for label, (c, p) in row.items()]
        branching = len(moves) > 1
        return "all", [
            (label, (c, p, level + 1, history + (label,) if branching and label in m.gamma else history, counter + u))
            for label, (c, p, u) in moves
        ]
    moves = list(m.delta_e.get(common, {}).items())
    if len(moves) <= 1:
        return "any", [(label, (target, private, level + 1, history, counter)) for label, target in moves]
    return "choice", [(label, (target, private, level + 1, history + (label,), counter)) for label, target in moves]


def _root(m) -> GameNode:
    return m.initial[0], m.initial[1], 0, (), 0


def strategy_enumeration_accepts(m, word: str) -> bool:
    """Try every strategy defined on the (common, public history) keys it reaches.

    Evaluation is three-valued: a node is True, False, or the first key the
    partial strategy does not cover. A False sibling settles a universal
    node even when another child is undefined. Undefined strategies are
    extended by every Γ label in turn.
    """
    tape = TapeView(word)

    def value(strategy, node):
        outcome = _game_moves(m, tape, node)
        if isinstance(outcome, bool):
            return outcome
        kind, children = outcome
        if kind == "choice":
            key = (node[0], node[3])
            if key not in strategy:
                return key
            children = [(label, child) for label, child in children if label == strategy[key]]
        if kind == "all":
            undefined = None
            for _, child in children:
                result = value(strategy, child)
                if result is False:
                    return False
                if result is not True and undefined is None:
                    undefined = result
            return True if undefined is None else undefined
        undefined = None
        for _, child in children:
            result = value(strategy, child)
            if result is True:
                return True
            if result is not False and undefined is None:
                undefined = result
        return False if undefined is None else undefined

    pending: List[Dict] = [{}]
    while pending:
        strategy = pending.pop()
        result = value(strategy, _root(m))
        if result is True:
            return True
        if result is not False:
            for label in m.gamma:
                extended = dict(strategy)
                extended[result] = label
                pending.append(extended)
    return False


def consistent_assignment_accepts(m, word: str, max_choice_nodes: int = 12) -> Optional[bool]:
    """Assign a label to every choice node of the full tree independently.

    Assignments where two nodes with the same common state and public
    history disagree are discarded; the word is accepted when a remaining
    assignment makes the root true. None when the tree has more than
    ``max_choice_nodes`` choice nodes.
    """
    tape = TapeView(word)
    choice_nodes = []
    seen = set()
    stack = [_root(m)]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        outcome = _game_moves(m, tape, node)
        if isinstance(outcome, bool):
            continue
        kind, children = outcome
        if kind == "choice":
            choice_nodes.append(node)
        stack.extend(child for _, child in children)
    if len(choice_nodes) > max_choice_nodes:
        return None

    def value(assignment, node):
        outcome = _game_moves(m, tape, node)
        if isinstance(outcome, bool):
            return outcome
        kind, children = outcome
        values = (value(assignment, child) for label, child in children
                  if kind != "choice" or label == assignment[node])
        return all(values) if kind == "all" else any(values)

    for labels in itertools.product(m.gamma, repeat=len(choice_nodes)):
        assignment = dict(zip(choice_nodes, labels))
        agreed: Dict[Tuple[str, Tuple[str, ...]], str] = {}
        if any(agreed.setdefault((node[0], node[3]), label) != label for node, label in assignment.items()):
            continue
        if value(assignment, _root(m)):
            return True
    return False


# ===== TURING MACHINES =====

def random_tm(rng: random.Random, max_states: int = 3) -> TmDescription:
    """A total transition table over ▷, _, a; ▷ is always kept with a right move."""
    states = tuple(f"q{i}" for i in range(rng.randint(1, max_states))) + ("qf",)
    symbols = (START_SYMBOL, BLANK_SYMBOL, "a")
    delta = {}
    for state in states[:-1]:
        delta[state] = {}
        for symbol in symbols:
            target = rng.choice(states)
            if symbol == START_SYMBOL:
                delta[state][symbol] = (target, START_SYMBOL, MOVE_RIGHT)
            else:
                delta[state][symbol] = (target, rng.choice(symbols[1:]), rng.choice((MOVE_LEFT, MOVE_RIGHT)))
    return TmDescription(states=states, initial="q0", halting="qf", tape_alphabet=symbols, delta=delta)


def well_behaved_tms(rng: random.Random, count: int, max_steps: int = 10, attempts: int = 5000) -> List[TmDescription]:
    """Random machines that halt within ``max_steps`` and meet every simulation assumption."""
    found = []
    for _ in range(attempts):
        m = random_tm(rng)
        if not tm_check_assumptions(m, max_steps) and tm_run(m, max_steps).halted:
            found.append(m)
            if len(found) == count:
                break
    return found


# ===== QUANTUM =====

def random_unitary(rng: random.Random, n: int):
    """Product of Givens rotations, a permutation and diagonal phases."""
    u = identity(n)
    if n > 1:
        for _ in range(rng.randint(1, 2)):
            i, j = rng.sample(range(n), 2)
            c, s = rng.choice(ROTATIONS)
            g = identity(n)
            g[i, i], g[i, j] = GaussianRational(c), GaussianRational(-s)
            g[j, i], g[j, j] = GaussianRational(s), GaussianRational(c)
            u = matmul(g, u)
        order = list(range(n))
        rng.shuffle(order)
        p = zeros(n)
        for row, column in enumerate(order):
            p[row, column] = GaussianRational(1)
        u = matmul(p, u)
    d = zeros(n)
    for i in range(n):
        d[i, i] = rng.choice(PHASES)
    return matmul(d, u)


def random_superoperator(rng: random.Random, n: int) -> Superoperator:
    """A unitary, a projective split after a unitary, or a two-way mixture."""
    kind = rng.choice(("unitary", "split", "mixture"))
    u = random_unitary(rng, n)
    if kind == "unitary" or n == 1 and kind == "split":
        return Superoperator([u])
    if kind == "split":
        chosen = set(rng.sample(range(n), rng.randint(1, n - 1)))
        first, second = zeros(n), zeros(n)
        for i in range(n):
            target = first if i in chosen else second
            target[i, i] = GaussianRational(1)
        return Superoperator([matmul(first, u), matmul(second, u)])
    c, s = rng.choice(ROTATIONS)
    v = random_unitary(rng, n)
    return Superoperator([scale(u, c), scale(v, s)])


def random_qfa(rng: random.Random, max_states: int = 3, symbols: str = "a") -> QfaDescription:
    n = rng.randint(1, max_states)
    basis = tuple(f"q{i}" for i in range(n))
    accept = frozenset(q for q in basis if rng.random() < 0.4)
    alphabet = Alphabet(tuple(symbols))
    ops = {symbol: random_superoperator(rng, n) for symbol in alphabet.with_end()}
    return QfaDescription(alphabet, basis, rng.choice(basis), accept, frozenset(basis) - accept, ops)


def sealed_qfa(rng: random.Random, symbols: str = "a") -> QfaDescription:
    """A 2- to 4-state machine whose accepting block is unreachable, so it is empty."""
    low = rng.randint(1, 2)
    high = rng.randint(1, 2)
    n = low + high
    basis = tuple(f"q{i}" for i in range(n))
    alphabet = Alphabet(tuple(symbols))
    ops = {}
    for symbol in alphabet.with_end():
        a, b = random_unitary(rng, low), random_unitary(rng, high)
        block = zeros(n)
        block[:low, :low] = a
        block[low:, low:] = b
        ops[symbol] = Superoperator([block])
    accept = frozenset(basis[low:])
    return QfaDescription(alphabet, basis, basis[0], accept, frozenset(basis[:low]), ops)


def equivalent_variant(rng: random.Random, m: QfaDescription) -> QfaDescription:
    """A differently written machine with the same acceptance function."""
    how = rng.choice(("phase", "mixture", "permute"))
    if how == "phase":
        ops = {s: Superoperator([scale(e, rng.choice(PHASES)) for e in op]) for s, op in m.ops.items()}
        return QfaDescription(m.alphabet, m.basis, m.initial, m.accept, m.reject, ops)
    if how == "mixture":
        c, s = rng.choice(ROTATIONS)
        ops = {
            symbol: Superoperator([scale(e, c) for e in op] + [scale(e, s) for e in op])
            for symbol, op in m.ops.items()
        }
        return QfaDescription(m.alphabet, m.basis, m.initial, m.accept, m.reject, ops)
    n = m.dimension
    order = list(range(n))
    rng.shuffle(order)
    p = zeros(n)
    for row, column in enumerate(order):
        p[row, column] = GaussianRational(1)
    pt = p.T.copy()
    ops = {symbol: Superoperator([matmul(matmul(p, e), pt) for e in op]) for symbol, op in m.ops.items()}
    renamed = {m.basis[column]: m.basis[row] for row, column in enumerate(order)}
    return QfaDescription(
        m.alphabet, m.basis, renamed[m.initial],
        frozenset(renamed[q] for q in m.accept), frozenset(renamed[q] for q in m.reject), ops,
    )


def probabilities_by_word(m: QfaDescription, max_len: int) -> Dict[str, Fraction]:
    """f(w) for every word of length ≤ max_len, sharing prefix densities."""

    def accepted(rho) -> Fraction:
        final = apply_superoperator(m.ops[END_MARKER], rho)
        return sum((final[m.index(q), m.index(q)].re for q in m.accept), Fraction(0))

    results = {}
    start = apply_superoperator(m.ops[END_MARKER], m.initial_density())
    frontier = [("", start)]
    for length in range(max_len + 1):
        following = []
        for word, rho in frontier:
            results[word] = accepted(rho)
            if length < max_len:
                for symbol in m.alphabet.symbols:
                    following.append((word + symbol, apply_superoperator(m.ops[symbol], rho)))
        frontier = following
    return results
