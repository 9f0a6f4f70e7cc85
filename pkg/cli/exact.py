"""
Exact Arithmetic

Gaussian rationals (complex numbers with Fraction parts) and the small
amount of exact linear algebra the quantum models need: object-dtype numpy
matrices, conjugate transposes, Kronecker products, an incremental
row-echelon basis, and rank-one factorizations used to complete
superoperators.

No floating point is used anywhere in this module.
"""

import logging
import re
from fractions import Fraction
from math import isqrt
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from cli.errors import AlgebraicAmplitudeError, DimensionError, MachineSchemaError

logger = logging.getLogger(__name__)

Rational = Fraction

# Anything with letters, roots or powers is a symbolic amplitude
_SYMBOLIC_AMPLITUDE = re.compile(r"[A-Za-z√^]|\*\*")


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(value) -> Optional["GaussianRational"]:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        return None

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        denominator = other.norm2()
        if denominator == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        numerator = self * other.conjugate()
        return GaussianRational(numerator.re / denominator, numerator.im / denominator)

    def __rtruediv__(self, other):
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus re² + im², always an exact rational."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = GaussianRational.coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self) -> str:
        if self.im == 0:
            return _short(self.re)
        if self.re == 0:
            return f"{_short(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{_short(self.re)}{sign}{_short(abs(self.im))}i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I_UNIT = GaussianRational(0, 1)


def _short(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# ===== TEXT FORMS =====

def parse_rational(text) -> Fraction:
    """Parse an exact rational literal ("3/5", "-2", "0.25"), canonicalized.

    Raises:
        AlgebraicAmplitudeError: symbolic values such as "sqrt(2)/2"
        MachineSchemaError: anything else that is not a rational literal
    """
    if not isinstance(text, str):
        raise MachineSchemaError(f"Rational must be a string like \"p/q\", got {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise MachineSchemaError(f"Rational {text!r} has a zero denominator")
    except ValueError:
        if _SYMBOLIC_AMPLITUDE.search(text):
            raise AlgebraicAmplitudeError(text)
        raise MachineSchemaError(f"Invalid rational literal: {text!r}")


def format_rational(value: Fraction) -> str:
    """Canonical "p/q" text (always with a denominator, "0/1" for zero)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_gaussian(pair) -> GaussianRational:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise MachineSchemaError(f"Amplitude must be a [re, im] pair, got {pair!r}")
    return GaussianRational(parse_rational(pair[0]), parse_rational(pair[1]))


def format_gaussian(value: GaussianRational) -> List[str]:
    return [format_rational(value.re), format_rational(value.im)]


# ===== MATRICES =====

def gq(value) -> GaussianRational:
    converted = GaussianRational.coerce(value)
    if converted is None:
        raise TypeError(f"Cannot use {value!r} as an exact amplitude")
    return converted


def to_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Build an object-dtype matrix of GaussianRational from nested numbers."""
    height = len(rows)
    width = len(rows[0]) if height else 0
    matrix = np.empty((height, width), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DimensionError("Ragged matrix rows")
        for j, entry in enumerate(row):
            matrix[i, j] = gq(entry)
    return matrix


def to_vector(entries: Iterable) -> np.ndarray:
    values = [gq(entry) for entry in entries]
    vector = np.empty(len(values), dtype=object)
    for i, value in enumerate(values):
        vector[i] = value
    return vector


def zeros(height: int, width: Optional[int] = None) -> np.ndarray:
    width = height if width is None else width
    matrix = np.empty((height, width), dtype=object)
    matrix.fill(ZERO)
    return matrix


def zero_vector(size: int) -> np.ndarray:
    vector = np.empty(size, dtype=object)
    vector.fill(ZERO)
    return vector


def identity(size: int) -> np.ndarray:
    matrix = zeros(size)
    np.fill_diagonal(matrix, ONE)
    return matrix


def basis_vector(size: int, index: int) -> np.ndarray:
    vector = zero_vector(size)
    vector[index] = ONE
    return vector


def scale(matrix: np.ndarray, factor) -> np.ndarray:
    return matrix * gq(factor)


def dagger(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conjugate(matrix).T.copy()


def matmul(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    if left.shape[-1] != right.shape[0]:
        raise DimensionError(f"Cannot multiply shapes {left.shape} and {right.shape}")
    return left.dot(right)


def outer(column: np.ndarray, row: np.ndarray) -> np.ndarray:
    """|column><row| without conjugating ``row``."""
    return np.outer(column, row)


def kron(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.kron(left, right)


def trace(matrix: np.ndarray) -> GaussianRational:
    return ZERO + matrix.diagonal().sum()


def matrices_equal(left: np.ndarray, right: np.ndarray) -> bool:
    if left.shape != right.shape:
        return False
    return bool(np.all(left == right))


def is_zero_array(array: np.ndarray) -> bool:
    return all(entry.is_zero() for entry in array.flat)


def vector_norm2(vector: np.ndarray) -> Fraction:
    return sum((entry.norm2() for entry in vector), Fraction(0))


def projective_key(vector: np.ndarray) -> Tuple[GaussianRational, ...]:
    """Scale-invariant key: the vector divided by its first nonzero entry."""
    for entry in vector:
        if not entry.is_zero():
            pivot = entry
            break
    else:
        return tuple(vector)
    return tuple(entry / pivot for entry in vector)


# ===== ROW-ECHELON BASIS =====

class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis over Q(i).

    Every stored row has a leading 1 at its pivot and zeros at the pivots of
    all other rows, so reducing a candidate against the rows one at a time
    is exact.
    """

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.rows: List[np.ndarray] = []
        self.pivots: List[int] = []
        self.tags: List[object] = []
        self.vectors: List[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: np.ndarray) -> np.ndarray:
        if len(vector) != self.dimension:
            raise DimensionError(f"Expected vector of size {self.dimension}, got {len(vector)}")
        residue = vector.copy()
        for pivot, row in zip(self.pivots, self.rows):
            factor = residue[pivot]
            if not factor.is_zero():
                residue = residue - row * factor
        return residue

    def contains(self, vector: np.ndarray) -> bool:
        return is_zero_array(self.reduce(vector))

    def add(self, vector: np.ndarray, tag: object = None) -> bool:
        """Add ``vector`` if it is independent; returns whether it was added."""
        residue = self.reduce(vector)
        pivot = next((i for i, entry in enumerate(residue) if not entry.is_zero()), None)
        if pivot is None:
            return False
        residue = residue * (ONE / residue[pivot])
        for index, row in enumerate(self.rows):
            factor = row[pivot]
            if not factor.is_zero():
                self.rows[index] = row - residue * factor
        self.rows.append(residue)
        self.pivots.append(pivot)
        self.tags.append(tag)
        self.vectors.append(vector)
        return True


# ===== RANK-ONE COMPLETION =====

def hermitian_rank_one_factors(matrix: np.ndarray) -> List[Tuple[Fraction, np.ndarray]]:
    """Factor a positive semidefinite Hermitian matrix as Σ d·l·l† with d > 0.

    Symmetric Gaussian elimination (LDLᴴ) over Q(i). Zero pivots are allowed
    only when the rest of their column is zero.

    Raises:
        ValueError: if the matrix is not Hermitian positive semidefinite
    """
    work = matrix.copy()
    size = work.shape[0]
    factors: List[Tuple[Fraction, np.ndarray]] = []
    for k in range(size):
        pivot = work[k, k]
        if not pivot.is_real() or pivot.re < 0:
            raise ValueError(f"Not positive semidefinite (pivot {pivot} at {k})")
        if pivot.re == 0:
            if any(not work[i, k].is_zero() for i in range(size)):
                raise ValueError(f"Not positive semidefinite (zero pivot with nonzero column {k})")
            continue
        d = pivot.re
        column = to_vector(work[i, k] / pivot for i in range(size))
        factors.append((d, column))
        for i in range(size):
            if column[i].is_zero():
                continue
            for j in range(size):
                if not column[j].is_zero():
                    work[i, j] = work[i, j] - column[i] * column[j].conjugate() * d
    if not is_zero_array(work):
        raise ValueError("Not Hermitian (elimination left a nonzero remainder)")
    return factors


def four_squares(n: int) -> Tuple[int, int, int, int]:
    """Integers a ≥ b ≥ c ≥ d ≥ 0 with a² + b² + c² + d² = n."""
    if n < 0:
        raise ValueError("four_squares needs a nonnegative integer")
    for a in range(isqrt(n), -1, -1):
        rest_a = n - a * a
        for b in range(min(a, isqrt(rest_a)), -1, -1):
            rest_b = rest_a - b * b
            for c in range(min(b, isqrt(rest_b)), -1, -1):
                rest_c = rest_b - c * c
                d = isqrt(rest_c)
                if d * d == rest_c and d <= c:
                    return a, b, c, d
    raise ArithmeticError(f"no four-square decomposition found for {n}")  # unreachable (Lagrange)


def rational_square_parts(value: Fraction) -> List[Fraction]:
    """Nonzero rationals whose squares sum to ``value`` (at most four)."""
    value = Fraction(value)
    if value < 0:
        raise ValueError("rational_square_parts needs a nonnegative value")
    p, q = value.numerator, value.denominator
    return [Fraction(part, q) for part in four_squares(p * q) if part]
