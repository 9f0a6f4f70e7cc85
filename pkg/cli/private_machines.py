"""Built-in private alternating machines.

Three constructions, each with a certificate-guessing existential player
and private universal checks:

    build_upower()         {1^m : m = 2^k, k ≥ 0}      PAFA
    build_twin()           {wcw : w ∈ {0,1}*}          PAFA
    build_usquare_pa1ca()  {1^m : m = k², k ≥ 0}       PA1CA (blind counter)

Tables are filled through TableBuilder, which applies the arity padding:
Δ labels carry the real targets of a private branching, Γ labels go to the
accepting state with the private component unchanged, and every universal
entry left unset rejects.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from cli.constants import (
    COUNTER_STATUSES,
    END_MARKER,
    PRIVATE_LABELS,
    STATUS_NONZERO,
    STATUS_ZERO,
    TWIN_LABELS,
    UPOWER_LABELS,
    USQUARE_LABELS,
)
from cli.private_alternation import Pa1caDescription, PafaDescription
from cli.tape import Alphabet

logger = logging.getLogger(__name__)

ACCEPT = "acc"
REJECT = "rej"

Target = Tuple[str, str, int]


class TableBuilder:
    """Accumulates δ_E and δ_U for a private machine."""

    def __init__(self, alphabet: Sequence[str], common_states: Sequence[str], private_states: Sequence[str],
                 universal_commons: Iterable[str], gamma: Sequence[str],
                 delta_priv: Sequence[str] = PRIVATE_LABELS, counter: bool = False):
        self.alphabet = Alphabet(tuple(alphabet))
        self.common_states = tuple(common_states)
        self.private_states = tuple(private_states)
        self.universal_commons = tuple(universal_commons)
        self.gamma = tuple(gamma)
        self.delta_priv = tuple(delta_priv)
        self.counter = counter
        self.delta_e: Dict[str, Dict[str, str]] = {}
        self.delta_u: Dict[Tuple[str, str], Dict[str, Dict[str, Dict[str, Target]]]] = {}

    def choose(self, common: str, targets: Dict[str, str]) -> None:
        """Existential moves; a partial label map is padded toward the rejecting state."""
        if len(targets) == 1:
            self.delta_e[common] = dict(targets)
        else:
            self.delta_e[common] = {label: targets.get(label, REJECT) for label in self.gamma}

    def _set(self, common: str, private: str, symbols: Iterable[str], moves: Dict[str, Target],
             status: Optional[str]) -> None:
        statuses = COUNTER_STATUSES if status is None else (status,)
        row = self.delta_u.setdefault((common, private), {})
        for symbol in symbols:
            for each in statuses:
                row.setdefault(symbol, {})[each] = dict(moves)

    def step(self, common: str, private: str, symbols: Iterable[str], target: Tuple[str, str],
             update: int = 0, status: Optional[str] = None) -> None:
        """A single universal successor (not a move; labeled with the first Δ label)."""
        self._set(common, private, symbols, {self.delta_priv[0]: (target[0], target[1], update)}, status)

    def branch(self, common: str, private: str, symbols: Iterable[str], targets: List[Target],
               status: Optional[str] = None) -> None:
        """A private universal branching over ``targets`` (repeated to fill Δ)."""
        moves = {label: (ACCEPT, private, 0) for label in self.gamma}
        for index, label in enumerate(self.delta_priv):
            moves[label] = targets[min(index, len(targets) - 1)]
        self._set(common, private, symbols, moves, status)

    def _complete(self) -> None:
        symbols = self.alphabet.with_end()
        for common in self.universal_commons:
            for private in self.private_states:
                row = self.delta_u.setdefault((common, private), {})
                for symbol in symbols:
                    by_status = row.setdefault(symbol, {})
                    for status in COUNTER_STATUSES:
                        by_status.setdefault(status, {self.delta_priv[0]: (REJECT, private, 0)})

    def build(self, initial: Tuple[str, str]):
        self._complete()
        universal = frozenset((c, p) for c in self.universal_commons for p in self.private_states)
        common = dict(
            alphabet=self.alphabet,
            common_states=self.common_states,
            private_states=self.private_states,
            universal=universal,
            gamma=self.gamma,
            delta_priv=self.delta_priv,
            initial=initial,
            accept=ACCEPT,
            reject=REJECT,
            delta_e=self.delta_e,
        )
        if self.counter:
            return Pa1caDescription(delta_u=self.delta_u, **common)
        delta_u = {
            pair: {
                symbol: {label: (c, p) for label, (c, p, _) in by_status[STATUS_ZERO].items()}
                for symbol, by_status in row.items()
            }
            for pair, row in self.delta_u.items()
        }
        return PafaDescription(delta_u=delta_u, **common)


def build_upower() -> PafaDescription:
    """PAFA for {1^m : m = 2^k}.

    The existential player announces one label per tape symbol (plus one on
    the right end-marker); "u1" marks the positions ⌊(2^i − 1)m / 2^i⌋.
    A private α branch walks the marks and spawns, at every mark, a β branch
    that checks the next mark sits halfway to the end.
    """
    plain, mark = UPOWER_LABELS
    one = "1"
    alpha_privates = ("alpha", "alpha_m", "alpha_mu")  # free / just after a mark / mark then a plain label
    beta_privates = ("beta_f", "beta")  # first cycle of a halving check / later cycles
    tb = TableBuilder(
        alphabet=(one,),
        common_states=("s0", "s1", "e", plain, mark, "e2", "u2", "y1", "y2", "y3", ACCEPT, REJECT),
        private_states=("p",) + alpha_privates + beta_privates,
        universal_commons=("s0", "s1", plain, mark, "u2", "y1", "y2", "y3"),
        gamma=UPOWER_LABELS,
    )
    tb.choose("e", {plain: plain, mark: mark})
    tb.choose("e2", {plain: "u2"})

    tb.step("s0", "p", [END_MARKER], ("s1", "p"))
    tb.branch("s1", "p", [END_MARKER], [("e", "alpha_m", 0), ("e", "beta_f", 0)])

    for private in alpha_privates:
        tb.step(plain, private, [one], ("e", "alpha_mu" if private == "alpha_m" else "alpha"))
        tb.branch(mark, private, [one], [("e", "alpha_m", 0), ("e", "beta_f", 0)])
        if private == "alpha_mu":
            tb.step(plain, private, [END_MARKER], (ACCEPT, private))
            tb.step(mark, private, [END_MARKER], (ACCEPT, private))

    for private in beta_privates:
        tb.step(plain, private, [one], ("e2", private))
        tb.step("u2", private, [one], ("e", "beta"))
        tb.step(mark, private, [one], ("y1", private))
        tb.step("y1", private, [one], ("y2", private))
        tb.step("y2", private, [one, END_MARKER], ("y3", private))
        tb.step("y3", private, [END_MARKER], (ACCEPT, private))
    tb.step("u2", "beta_f", [END_MARKER], (ACCEPT, "beta_f"))

    m = tb.build(initial=("s0", "p"))
    logger.debug("Built UPOWER with %d common and %d private states", len(m.common_states), len(m.private_states))
    return m


def build_twin() -> PafaDescription:
    """PAFA for {wcw : w ∈ {0,1}*}.

    The existential player announces a certificate x₁…x_k c. One private
    branch compares it against the prefix before the first c; the other
    skips to the symbol after the c and compares it against the suffix.
    Both branches present the same public history.
    """
    zero, one, sep = TWIN_LABELS
    tb = TableBuilder(
        alphabet=TWIN_LABELS,
        common_states=("ei", "ui", "e", "u0", "u1", "uc", ACCEPT, REJECT),
        private_states=("p", "alpha", "beta1", "beta2", "alpha2"),
        universal_commons=("ui", "u0", "u1", "uc"),
        gamma=TWIN_LABELS,
    )
    reads = {zero: "u0", one: "u1", sep: "uc"}
    tb.choose("ei", {zero: "ui"})
    tb.choose("e", reads)

    tb.branch("ui", "p", [END_MARKER], [("e", "alpha", 0), ("ui", "beta1", 0)])
    tb.step("ui", "beta1", [zero, one, sep, END_MARKER], ("ui", "beta2"))
    tb.step("ui", "beta2", [zero, one], ("ui", "beta1"))
    tb.step("ui", "beta2", [sep], ("e", "alpha2"))

    for letter in (zero, one):
        tb.step(reads[letter], "alpha", [letter], ("e", "alpha"))
        tb.step(reads[letter], "alpha2", [letter], ("e", "alpha2"))
    tb.step("uc", "alpha", [sep], (ACCEPT, "alpha"))
    tb.step("uc", "alpha2", [END_MARKER], (ACCEPT, "alpha2"))

    m = tb.build(initial=("ei", "p"))
    logger.debug("Built TWIN with %d common and %d private states", len(m.common_states), len(m.private_states))
    return m


def build_usquare_pa1ca() -> Pa1caDescription:
    """PA1CA for {1^m : m = k²}, with the counter tested only on the end-marker.

    The existential player writes one segment symbol per input symbol
    ("1" or "#"), spelling segments 1^{x−1}#. Private branches check that
    the certificate ends with "#", that every pair of adjacent segments has
    equal length (a universal branch starts a check at each segment, counting
    up on the first and down on the second), and that the number of segments
    equals the length of the first.
    """
    one, cut = USQUARE_LABELS
    reads = {one: "u1", cut: "uh"}
    main = ("main_closed", "main_open")
    pair = ("pair_idle", "pair_mid", "pair_up", "pair_down", "pair_done")
    count = ("count_first", "count_rest")
    tb = TableBuilder(
        alphabet=(one,),
        common_states=("s0", "s1", "e", "u1", "uh", ACCEPT, REJECT),
        private_states=("p", "split") + main + pair + count,
        universal_commons=("s0", "s1", "u1", "uh"),
        gamma=USQUARE_LABELS,
        counter=True,
    )
    tb.choose("e", reads)

    tb.branch("s0", "p", [END_MARKER], [("s1", "main_closed", 0), ("s1", "split", 0)])
    tb.step("s1", "main_closed", [END_MARKER], ("e", "main_closed"))
    tb.branch("s1", "split", [END_MARKER], [("e", "pair_idle", 0), ("e", "count_first", 0)])

    for private in main:
        tb.step("u1", private, [one], ("e", "main_open"))
        tb.step("uh", private, [one], ("e", "main_closed"))
        if private == "main_closed":
            tb.step("u1", private, [END_MARKER], (ACCEPT, private))
            tb.step("uh", private, [END_MARKER], (ACCEPT, private))

    tb.branch("u1", "pair_idle", [one], [("e", "pair_mid", 0), ("e", "pair_up", 1)])
    tb.branch("uh", "pair_idle", [one], [("e", "pair_idle", 0), ("e", "pair_down", 1)])
    tb.step("u1", "pair_mid", [one], ("e", "pair_mid"))
    tb.step("uh", "pair_mid", [one], ("e", "pair_idle"))
    tb.step("u1", "pair_up", [one], ("e", "pair_up"), update=1)
    tb.step("uh", "pair_up", [one], ("e", "pair_down"), update=1)
    tb.step("u1", "pair_down", [one], ("e", "pair_down"), update=-1)
    tb.step("uh", "pair_down", [one], ("e", "pair_done"), update=-1)
    tb.step("u1", "pair_done", [one], ("e", "pair_done"))
    tb.step("uh", "pair_done", [one], ("e", "pair_done"))

    tb.step("u1", "count_first", [one], ("e", "count_first"), update=1)
    tb.step("uh", "count_first", [one], ("e", "count_rest"))
    tb.step("u1", "count_rest", [one], ("e", "count_rest"))
    tb.step("uh", "count_rest", [one], ("e", "count_rest"), update=-1)

    for common in reads.values():
        for private in ("pair_idle", "pair_mid", "pair_up", "pair_down", "count_first"):
            tb.step(common, private, [END_MARKER], (ACCEPT, private))
        for private in ("pair_done", "count_rest"):
            tb.step(common, private, [END_MARKER], (ACCEPT, private), status=STATUS_ZERO)
            tb.step(common, private, [END_MARKER], (REJECT, private), status=STATUS_NONZERO)

    m = tb.build(initial=("s0", "p"))
    logger.debug("Built USQUARE PA1CA with %d common and %d private states",
                 len(m.common_states), len(m.private_states))
    return m
