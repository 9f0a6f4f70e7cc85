#!/usr/bin/env python3
"""
Quantum Finite Automata

Exact simulation of quantum finite automata with mixed states. A QFA reads
¢w¢, applying one superoperator per tape symbol to a density matrix, and
then measures with the accepting projector:

    f(w) = Tr(P_a · E_¢(E_wn(… E_w1(E_¢(ρ₀)) …)))

Every amplitude is a GaussianRational, so f(w) is an exact Fraction and
"f(w) > 0" / "f(w) = 1" are decided without tolerance. Equivalence and
NQFA emptiness are decided by closing the spanned subspace of vectorized
density matrices under the per-symbol linear maps.
"""

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from cli.constants import END_MARKER, MAX_COMPLETION_SCALE
from cli.errors import DimensionError, MachineValidationError
from cli.exact import (
    ONE,
    EchelonBasis,
    basis_vector,
    dagger,
    format_gaussian,
    hermitian_rank_one_factors,
    identity,
    kron,
    matmul,
    matrices_equal,
    outer,
    parse_gaussian,
    rational_square_parts,
    scale,
    to_matrix,
    trace,
    zeros,
)
from cli.tape import Alphabet, EmptinessVerdict, Verdict, check_word, format_word, key_symbol, symbol_key

logger = logging.getLogger(__name__)


class Superoperator:
    """Ordered operation elements E₁…E_l; outcome k names element k (0-based)."""

    def __init__(self, elements: Sequence[np.ndarray]):
        self.elements: Tuple[np.ndarray, ...] = tuple(elements)

    @classmethod
    def identity(cls, dimension: int) -> "Superoperator":
        return cls([identity(dimension)])

    @property
    def dimension(self) -> int:
        return self.elements[0].shape[0] if self.elements else 0

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Superoperator):
            return NotImplemented
        return len(self) == len(other) and all(
            matrices_equal(a, b) for a, b in zip(self.elements, other.elements)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Superoperator({len(self.elements)} elements, dimension {self.dimension})"


def superoperator_violations(op: Superoperator, dimension: Optional[int] = None, where: str = "superoperator") -> List[str]:
    """Shape problems and the completeness check Σ E_k†E_k = I."""
    if not op.elements:
        return [f"{where} has no operation elements"]
    size = op.dimension if dimension is None else dimension
    problems = []
    for k, element in enumerate(op.elements):
        if element.shape != (size, size):
            problems.append(f"{where} element {k} has shape {element.shape}, expected {(size, size)}")
    if problems:
        return problems
    total = zeros(size)
    for element in op.elements:
        total = total + matmul(dagger(element), element)
    if not matrices_equal(total, identity(size)):
        problems.append(f"{where} is not complete: Σ E†E ≠ I")
    return problems


def apply_superoperator(op: Superoperator, rho: np.ndarray) -> np.ndarray:
    """Σ_k E_k ρ E_k†, exactly."""
    if rho.shape != (op.dimension, op.dimension):
        raise DimensionError(f"Density of shape {rho.shape} does not fit a {op.dimension}-dimensional superoperator")
    result = zeros(op.dimension)
    for element in op.elements:
        result = result + matmul(matmul(element, rho), dagger(element))
    return result


def density_violations(rho: np.ndarray) -> List[str]:
    """Necessary density-operator conditions: Hermitian, unit trace, real nonnegative diagonal."""
    problems = []
    if not matrices_equal(rho, dagger(rho)):
        problems.append("density matrix is not Hermitian")
    diagonal = [rho[i, i] for i in range(rho.shape[0])]
    if trace(rho) != ONE:
        problems.append("density matrix trace is not 1")
    for i, entry in enumerate(diagonal):
        if not entry.is_real() or entry.re < 0:
            problems.append(f"diagonal entry {i} is {entry}, not a nonnegative real")
    return problems


# ===== QFA =====

@dataclass(frozen=True, eq=False)
class QfaDescription:
    """Basis Q, one superoperator per symbol of Σ ∪ {¢}, initial basis state, accept/reject subsets."""

    alphabet: Alphabet
    basis: Tuple[str, ...]
    initial: str
    accept: FrozenSet[str]
    reject: FrozenSet[str]
    ops: Dict[str, Superoperator]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index(self, state: str) -> int:
        return self.basis.index(state)

    def initial_vector(self) -> np.ndarray:
        return basis_vector(self.dimension, self.index(self.initial))

    def initial_density(self) -> np.ndarray:
        vector = self.initial_vector()
        return outer(vector, vector)

    def projector(self, subset: FrozenSet[str]) -> np.ndarray:
        matrix = zeros(self.dimension)
        for state in subset:
            i = self.index(state)
            matrix[i, i] = ONE
        return matrix

    def __eq__(self, other) -> bool:
        if not isinstance(other, QfaDescription):
            return NotImplemented
        return (self.alphabet, self.basis, self.initial, self.accept, self.reject) == \
            (other.alphabet, other.basis, other.initial, other.accept, other.reject) and self.ops == other.ops

    __hash__ = None


def validate_qfa(m: QfaDescription) -> List[str]:
    violations = []
    basis = list(m.basis)
    if not basis:
        violations.append("basis must not be empty")
    if len(set(basis)) != len(basis):
        violations.append("basis state names must be distinct")
    known = set(basis)
    if m.initial not in known:
        violations.append(f"initial basis state {m.initial!r} is not declared")
    for name, subset in (("accept", m.accept), ("reject", m.reject)):
        for state in sorted(set(subset) - known):
            violations.append(f"{name} subset mentions undeclared basis state {state!r}")
    if set(m.accept) & set(m.reject):
        violations.append("accept and reject subsets must be disjoint")
    if (set(m.accept) | set(m.reject)) != known:
        violations.append("accept and reject subsets must cover the basis (P_a + P_r = I)")
    symbols = m.alphabet.with_end()
    for symbol in symbols:
        if symbol not in m.ops:
            violations.append(f"no superoperator for symbol {symbol_key(symbol)!r}")
    for symbol, op in m.ops.items():
        if symbol not in symbols:
            violations.append(f"superoperator for {symbol_key(symbol)!r}, which is not in Σ ∪ {{¢}}")
        violations.extend(superoperator_violations(op, len(basis), f"E_{symbol_key(symbol)}"))
    return violations


def _framed(word: str) -> str:
    return END_MARKER + word + END_MARKER


def qfa_density_trace(m: QfaDescription, w: str) -> List[np.ndarray]:
    """ρ₀ followed by the density after each of the |w| + 2 superoperator steps."""
    check_word(m.alphabet, w)
    rho = m.initial_density()
    densities = [rho]
    for symbol in _framed(w):
        rho = apply_superoperator(m.ops[symbol], rho)
        densities.append(rho)
    return densities


def _accepted_mass(m: QfaDescription, rho: np.ndarray) -> Fraction:
    total = Fraction(0)
    for state in m.accept:
        i = m.index(state)
        total += rho[i, i].re
    return total


def qfa_accept_probability(m: QfaDescription, w: str) -> Fraction:
    """f(w) = Tr(P_a ρ) after E_¢, the word, and E_¢."""
    return _accepted_mass(m, qfa_density_trace(m, w)[-1])


def nqfa_accepts(m: QfaDescription, w: str) -> Verdict:
    """Positive one-sided unbounded error: accept iff f(w) > 0."""
    return Verdict.of(qfa_accept_probability(m, w) > 0)


def uqfa_accepts(m: QfaDescription, w: str) -> Verdict:
    """Negative one-sided unbounded error: accept iff f(w) = 1."""
    return Verdict.of(qfa_accept_probability(m, w) == 1)


def complement_qfa(m: QfaDescription) -> QfaDescription:
    """The same machine with accept and reject swapped, so f becomes 1 − f."""
    return QfaDescription(m.alphabet, m.basis, m.initial, m.reject, m.accept, dict(m.ops))


def zero_qfa(alphabet: Alphabet) -> QfaDescription:
    """The one-state machine that accepts every word with probability 0."""
    ops = {symbol: Superoperator.identity(1) for symbol in alphabet.with_end()}
    return QfaDescription(alphabet, ("q0",), "q0", frozenset(), frozenset({"q0"}), ops)


# ===== EQUIVALENCE AND EMPTINESS =====

@dataclass(frozen=True)
class EquivalenceVerdict:
    """EQUIVALENT, or the shortlex-least word on which the two machines differ."""

    equivalent: bool
    counterexample: Optional[str] = None
    basis_size: int = 0

    def __str__(self) -> str:
        return "EQUIVALENT" if self.equivalent else f"COUNTEREXAMPLE {format_word(self.counterexample)}"


def _linear_map(op: Superoperator) -> np.ndarray:
    """Matrix of ρ ↦ Σ E ρ E† acting on row-major vectorized densities."""
    total = None
    for element in op.elements:
        term = kron(element, dagger(element).T)
        total = term if total is None else total + term
    return total


def _direct_sum(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    result = zeros(left.shape[0] + right.shape[0])
    result[:left.shape[0], :left.shape[1]] = left
    result[left.shape[0]:, left.shape[1]:] = right
    return result


class _PairedMachines:
    """Two QFAs over one alphabet, acting on the direct sum of their vectorized densities."""

    def __init__(self, first: QfaDescription, second: QfaDescription):
        self.first, self.second = first, second
        self.split = first.dimension ** 2
        self.maps = {
            symbol: _direct_sum(_linear_map(first.ops[symbol]), _linear_map(second.ops[symbol]))
            for symbol in first.alphabet.with_end()
        }

    def start(self) -> np.ndarray:
        left = apply_superoperator(self.first.ops[END_MARKER], self.first.initial_density())
        right = apply_superoperator(self.second.ops[END_MARKER], self.second.initial_density())
        return np.concatenate([left.reshape(-1), right.reshape(-1)])

    def difference(self, vector: np.ndarray) -> Fraction:
        """f₁ − f₂ for the word whose post-prefix vector is ``vector`` (linear in the vector)."""
        final = self.maps[END_MARKER].dot(vector)
        n1, n2 = self.first.dimension, self.second.dimension
        left = final[:self.split].reshape(n1, n1)
        right = final[self.split:].reshape(n2, n2)
        return _accepted_mass(self.first, left) - _accepted_mass(self.second, right)


def qfa_equivalence(m1: QfaDescription, m2: QfaDescription) -> EquivalenceVerdict:
    """Decide f₁(w) = f₂(w) for every word.

    Breadth-first closure in shortlex order keeps a basis of the reachable
    span; each basis vector is tagged with the first word producing it, so
    the first tag on which f₁ − f₂ is nonzero is the shortlex-least
    counterexample.
    """
    if m1.alphabet != m2.alphabet:
        raise ValueError(
            f"Alphabet mismatch: {''.join(m1.alphabet.symbols)!r} vs {''.join(m2.alphabet.symbols)!r}"
        )
    pair = _PairedMachines(m1, m2)
    basis = EchelonBasis(m1.dimension ** 2 + m2.dimension ** 2)
    start = pair.start()
    queue = deque()
    if basis.add(start, ""):
        queue.append(("", start))
    while queue:
        word, vector = queue.popleft()
        for symbol in m1.alphabet.symbols:
            successor = pair.maps[symbol].dot(vector)
            if basis.add(successor, word + symbol):
                queue.append((word + symbol, successor))
    logger.debug("Spanning set closed with %d of %d dimensions", len(basis), basis.dimension)
    for tag, vector in zip(basis.tags, basis.vectors):
        if pair.difference(vector) != 0:
            return EquivalenceVerdict(False, tag, len(basis))
    return EquivalenceVerdict(True, None, len(basis))


def nqfa_emptiness(m: QfaDescription) -> EmptinessVerdict:
    """EMPTY iff f(w) = 0 for every word; otherwise the shortlex-least accepted word."""
    verdict = qfa_equivalence(m, zero_qfa(m.alphabet))
    if verdict.equivalent:
        return EmptinessVerdict(empty=True)
    return EmptinessVerdict.nonempty(verdict.counterexample)


# ===== COMPLETION =====

def complete_superoperator(main_elements: Sequence[np.ndarray],
                           max_scale: int = MAX_COMPLETION_SCALE) -> Tuple[int, Superoperator]:
    """Scale ``main_elements`` by 1/c and add residual elements to reach completeness.

    c is the smallest integer for which I − Σ A†A/c² is positive
    semidefinite. The remainder is factored as Σ d·l·l† and each d is split
    into rational squares r², giving residual elements r·e₀·l† (all on row 0).
    The main elements keep outcomes 0..len(main)−1.
    """
    size = main_elements[0].shape[0]
    for c in range(1, max_scale + 1):
        scaled = [scale(element, Fraction(1, c)) for element in main_elements]
        remainder = identity(size)
        for element in scaled:
            remainder = remainder - matmul(dagger(element), element)
        try:
            factors = hermitian_rank_one_factors(remainder)
        except ValueError:
            continue
        residuals = []
        for d, column in factors:
            row = dagger(column.reshape(-1, 1))
            for part in rational_square_parts(d):
                residual = zeros(size)
                residual[0, :] = scale(row, part)[0, :]
                residuals.append(residual)
        logger.debug("Completed %d elements with scale 1/%d and %d residuals", len(scaled), c, len(residuals))
        return c, Superoperator(scaled + residuals)
    raise ValueError(f"No completion with scale ≤ {max_scale}")


# ===== MACHINE FILE FRAGMENTS =====

def superoperator_from_json(matrices: List[Any]) -> Superoperator:
    elements = []
    for k, rows in enumerate(matrices):
        try:
            elements.append(to_matrix([[parse_gaussian(pair) for pair in row] for row in rows]))
        except DimensionError as e:
            raise MachineValidationError([f"operation element {k}: {e}"])
    return Superoperator(elements)


def superoperator_to_json(op: Superoperator) -> List[Any]:
    return [[[format_gaussian(entry) for entry in row] for row in element] for element in op.elements]


def qfa_from_json(alphabet: Alphabet, obj: Dict[str, Any]) -> QfaDescription:
    basis = tuple(obj["basis"])
    accept = frozenset(obj["accept"])
    reject = frozenset(obj["reject"]) if "reject" in obj else frozenset(basis) - accept
    ops = {key_symbol(key): superoperator_from_json(matrices) for key, matrices in obj["ops"].items()}
    return QfaDescription(alphabet, basis, obj["initial"], accept, reject, ops)


def _in_basis_order(basis: Tuple[str, ...], subset) -> List[str]:
    order = {state: i for i, state in enumerate(basis)}
    return sorted(subset, key=lambda state: (order.get(state, len(order)), state))


def qfa_to_json(m: QfaDescription) -> Dict[str, Any]:
    return {
        "basis": list(m.basis),
        "initial": m.initial,
        "accept": _in_basis_order(m.basis, m.accept),
        "reject": _in_basis_order(m.basis, m.reject),
        "ops": {symbol_key(symbol): superoperator_to_json(op) for symbol, op in m.ops.items()},
    }
