"""Alphabets, words, and the realtime tape view shared by every model.

Words are plain ``str`` values (every symbol is one character). An input w
is read as ¢w¢ and every tape symbol is read by exactly two consecutive
levels of the computation tree, so a tree over a word of length n has depth
2n + 4.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from cli.constants import END_KEY, END_MARKER
from cli.errors import MachineSchemaError, SymbolError

logger = logging.getLogger(__name__)


class Verdict(Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    @classmethod
    def of(cls, accepted: bool) -> "Verdict":
        return cls.ACCEPT if accepted else cls.REJECT

    @property
    def accepted(self) -> bool:
        return self is Verdict.ACCEPT

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class EmptinessVerdict:
    """EMPTY, or NONEMPTY together with an accepted witness word."""

    empty: bool
    witness: Optional[str] = None

    def __post_init__(self):
        if not self.empty and self.witness is None:
            raise ValueError("A nonempty verdict must carry a witness word")
        if self.empty and self.witness is not None:
            raise ValueError("An empty verdict has no witness")

    @classmethod
    def nonempty(cls, witness: str) -> "EmptinessVerdict":
        return cls(empty=False, witness=witness)

    def __str__(self) -> str:
        return "EMPTY" if self.empty else f"NONEMPTY {format_word(self.witness)}"


@dataclass(frozen=True)
class Alphabet:
    """Nonempty ordered set of one-character symbols, excluding the end-marker."""

    symbols: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        problems = alphabet_violations(self.symbols)
        if problems:
            raise MachineSchemaError("Invalid alphabet: " + "; ".join(problems))

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def with_end(self) -> Tuple[str, ...]:
        """Σ̃ = Σ ∪ {¢}, in alphabet order followed by the end-marker."""
        return self.symbols + (END_MARKER,)


def alphabet_violations(symbols: Iterable) -> List[str]:
    symbols = list(symbols)
    problems = []
    if not symbols:
        problems.append("alphabet must not be empty")
    for symbol in symbols:
        if not isinstance(symbol, str) or len(symbol) != 1:
            problems.append(f"symbol {symbol!r} is not a single character")
        elif symbol == END_MARKER:
            problems.append(f"symbol {END_MARKER!r} is the reserved end-marker")
    if len(set(symbols)) != len(symbols):
        problems.append("alphabet has duplicate symbols")
    return problems


def check_word(alphabet: Alphabet, word: str) -> None:
    """Raise SymbolError if ``word`` uses a symbol outside ``alphabet``."""
    for position, symbol in enumerate(word, start=1):
        if symbol not in alphabet:
            raise SymbolError(
                f"Symbol {symbol!r} at position {position} of {word!r} is not in the alphabet "
                f"{''.join(alphabet.symbols)!r}"
            )


@dataclass(frozen=True)
class TapeView:
    """The framed input ¢w¢ with the level-to-symbol map.

    A transition taken from a node at level i reads tape position ⌊i/2⌋ + 1
    (1-based), so levels 0 and 1 read the left end-marker and levels
    2n + 2 and 2n + 3 read the right one.
    """

    word: str

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def tape(self) -> str:
        return END_MARKER + self.word + END_MARKER

    @property
    def depth(self) -> int:
        """Number of transition steps, 2(n + 2); leaves sit at this level."""
        return 2 * (len(self.word) + 2)

    def position(self, level: int) -> int:
        if not 0 <= level < self.depth:
            raise IndexError(f"Level {level} outside 0..{self.depth - 1}")
        return level // 2 + 1

    def symbol_at(self, level: int) -> str:
        return self.tape[self.position(level) - 1]

    def input_index(self, level: int) -> int:
        """0 for the left end-marker, 1..n for the word, n + 1 for the right end-marker."""
        return self.position(level) - 1


def enumerate_words(alphabet: Alphabet, max_len: int) -> List[str]:
    """All words of length ≤ max_len in shortlex order (length, then alphabet order)."""
    if max_len < 0:
        raise ValueError(f"max_len must be nonnegative, got {max_len}")
    words = []
    for length in range(max_len + 1):
        for letters in itertools.product(alphabet.symbols, repeat=length):
            words.append("".join(letters))
    return words


def shortlex_key(alphabet_order: Tuple[str, ...], word: Iterable[str]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key placing sequences in shortlex order over ``alphabet_order``."""
    indexes = tuple(alphabet_order.index(symbol) for symbol in word)
    return len(indexes), indexes


def symbol_key(symbol: str) -> str:
    """Machine-file key for a tape symbol ("@end" for the end-marker)."""
    return END_KEY if symbol == END_MARKER else symbol


def key_symbol(key: str) -> str:
    """Inverse of symbol_key."""
    return END_MARKER if key == END_KEY else key


def format_word(word: str) -> str:
    """Printable form of a word; the empty word shows as ε."""
    return word if word else "ε"
