#!/usr/bin/env python3
"""
Turing Machine Compiler

Deterministic one-tape Turing machines, a direct simulator, and a compiler
producing a unary alternating one-counter automaton that accepts u^{2n}
exactly when the machine, started on an empty tape, halts in n steps.

The compiled automaton simulates backwards. It starts from the halting
contents (qf, ▷) of cell 0 with counter 0 and repeats, for every pair of
input symbols:

    1. existentially guess the window (s₋₁, s₀, s₊₁) one step earlier
       such that next_contents(s₋₁, s₀, s₊₁) is the stored contents;
    2. universally branch to the three cells C−1, C, C+1, moving the
       counter (the relative position C) by −1, 0, +1.

At the end of the input each branch checks its cell against the empty-tape
start configuration: (q0, ▷) at counter zero, blank elsewhere.

Machines must satisfy the simulation's assumptions (checked, not enforced,
by tm_check_assumptions): ▷ stays in cell 0, the head never moves left of
it, and the head first returns to cell 0 at the halting step.

TM file format:
    {"states": [...], "initial": q0, "halting": qf, "tape_alphabet": [...],
     "start_symbol": "▷", "blank": "_",
     "delta": {state: {symbol: [state, symbol, "L" | "R"]}}}
"""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Tuple, Union

from cli.alternating import A1caDescription
from cli.constants import (
    BLANK_SYMBOL,
    DEFAULT_MAX_STEPS,
    END_MARKER,
    MOVE_LEFT,
    MOVE_RIGHT,
    OFF_TAPE,
    START_SYMBOL,
    STATUS_NONZERO,
    STATUS_ZERO,
    UNARY_SYMBOL,
)
from cli.errors import MachineSyntaxError, MachineValidationError, TuringMachineError
from cli.machine_format import canonical_json, check_schema
from cli.tape import Alphabet

logger = logging.getLogger(__name__)

Action = Tuple[str, str, str]  # (next state, written symbol, direction)


class Head(NamedTuple):
    """A cell holding the head: the machine state and the scanned symbol."""

    state: str
    symbol: str

    def __str__(self) -> str:
        return f"({self.state},{self.symbol})"


CellContents = Union[str, Head]
Window = Tuple[CellContents, CellContents, CellContents]


@dataclass(frozen=True)
class TmDescription:
    states: Tuple[str, ...]
    initial: str
    halting: str
    tape_alphabet: Tuple[str, ...]
    delta: Dict[str, Dict[str, Action]]
    start_symbol: str = START_SYMBOL
    blank: str = BLANK_SYMBOL

    def action(self, state: str, symbol: str) -> Optional[Action]:
        return self.delta.get(state, {}).get(symbol)

    def contents(self) -> List[CellContents]:
        """Every possible cell contents: plain symbols, then state-symbol pairs."""
        return list(self.tape_alphabet) + [Head(q, x) for q in self.states for x in self.tape_alphabet]


def validate_tm(m: TmDescription) -> List[str]:
    violations = []
    states, symbols = set(m.states), set(m.tape_alphabet)
    if len(states) != len(m.states):
        violations.append("state names must be distinct")
    if len(symbols) != len(m.tape_alphabet):
        violations.append("tape symbols must be distinct")
    for name, state in (("initial", m.initial), ("halting", m.halting)):
        if state not in states:
            violations.append(f"{name} state {state!r} is not declared")
    if m.initial == m.halting:
        violations.append("initial and halting states must differ")
    for name, symbol in (("start symbol", m.start_symbol), ("blank", m.blank)):
        if symbol not in symbols:
            violations.append(f"{name} {symbol!r} is not in the tape alphabet")
    if m.start_symbol == m.blank:
        violations.append("start symbol and blank must differ")
    if OFF_TAPE in symbols:
        violations.append(f"tape symbol {OFF_TAPE!r} is reserved")
    if m.delta.get(m.halting):
        violations.append(f"halting state {m.halting!r} has outgoing transitions")
    for state, row in m.delta.items():
        if state not in states:
            violations.append(f"transitions for undeclared state {state!r}")
        for symbol, (target, written, direction) in row.items():
            where = f"δ({state}, {symbol})"
            if symbol not in symbols:
                violations.append(f"{where}: symbol not in the tape alphabet")
            if target not in states:
                violations.append(f"{where}: target state {target!r} is not declared")
            if written not in symbols:
                violations.append(f"{where}: written symbol {written!r} not in the tape alphabet")
            if direction not in (MOVE_LEFT, MOVE_RIGHT):
                violations.append(f"{where}: direction must be {MOVE_LEFT!r} or {MOVE_RIGHT!r}")
            if symbol == m.start_symbol and (written != m.start_symbol or direction != MOVE_RIGHT):
                violations.append(f"{where}: ▷ must be rewritten as ▷ with a right move")
            elif symbol != m.start_symbol and written == m.start_symbol:
                violations.append(f"{where}: only cell 0 may hold the start symbol")
    return violations


# ===== SIMULATION =====

@dataclass(frozen=True)
class TmRunResult:
    """Either halted after ``steps`` steps with the head on ``head``, or still running."""

    halted: bool
    steps: int
    head: int
    state: str

    def __str__(self) -> str:
        if self.halted:
            return f"halted at step {self.steps} with head at cell {self.head}"
        return f"still running after {self.steps} steps"


class _Simulation:
    """Mutable run state: tape cells, head position, state and step count."""

    def __init__(self, m: TmDescription):
        self.m = m
        self.tape: List[str] = [m.start_symbol]
        self.head = 0
        self.state = m.initial
        self.steps = 0

    def scanned(self) -> str:
        return self.tape[self.head] if self.head < len(self.tape) else self.m.blank

    def configuration(self, width: int) -> Tuple[CellContents, ...]:
        cells: List[CellContents] = [
            self.tape[i] if i < len(self.tape) else self.m.blank for i in range(width)
        ]
        cells[self.head] = Head(self.state, cells[self.head])
        return tuple(cells)

    def step(self) -> None:
        action = self.m.action(self.state, self.scanned())
        if action is None:
            raise TuringMachineError(
                f"No transition for state {self.state!r} on {self.scanned()!r} at step {self.steps}"
            )
        target, written, direction = action
        while len(self.tape) <= self.head:
            self.tape.append(self.m.blank)
        self.tape[self.head] = written
        if direction == MOVE_LEFT:
            if self.head == 0:
                raise TuringMachineError(f"Head moves left of cell 0 at step {self.steps}")
            self.head -= 1
        else:
            self.head += 1
        self.state = target
        self.steps += 1


def tm_run(m: TmDescription, max_steps: int = DEFAULT_MAX_STEPS) -> TmRunResult:
    """Simulate from the empty tape (q0 on ▷ in cell 0, blanks elsewhere)."""
    sim = _Simulation(m)
    while sim.state != m.halting:
        if sim.steps >= max_steps:
            return TmRunResult(False, sim.steps, sim.head, sim.state)
        sim.step()
    return TmRunResult(True, sim.steps, sim.head, sim.state)


def tm_configurations(m: TmDescription, steps: int) -> List[Tuple[CellContents, ...]]:
    """Configurations 0..steps (fewer if the machine halts), each steps + 2 cells wide."""
    sim = _Simulation(m)
    width = steps + 2
    configurations = [sim.configuration(width)]
    while sim.steps < steps and sim.state != m.halting:
        sim.step()
        configurations.append(sim.configuration(width))
    return configurations


def tm_check_assumptions(m: TmDescription, max_steps: int = DEFAULT_MAX_STEPS) -> List[str]:
    """Violations of the backwards-simulation assumptions seen within ``max_steps``.

    An empty list is not a proof: a machine still running at the bound is
    only checked up to it.
    """
    violations = []
    sim = _Simulation(m)
    while sim.state != m.halting and sim.steps < max_steps:
        scanned = sim.scanned()
        action = m.action(sim.state, scanned)
        if action is None:
            violations.append(
                f"halts in state {sim.state!r} (no transition on {scanned!r}) at step {sim.steps}, not in {m.halting!r}"
            )
            return violations
        _, written, direction = action
        if scanned == m.start_symbol and written != m.start_symbol:
            violations.append(f"overwrites ▷ at step {sim.steps}")
        if sim.head == 0 and direction == MOVE_LEFT:
            violations.append(f"moves left of ▷ at step {sim.steps}")
            return violations
        sim.step()
        if sim.head == 0 and sim.state != m.halting:
            violations.append(f"early return to C=0 at step {sim.steps}")
    if sim.state == m.halting and sim.head != 0:
        violations.append(f"halt away from cell 0 (head at cell {sim.head}, step {sim.steps})")
    return violations


def next_contents(m: TmDescription, left: CellContents, middle: CellContents,
                  right: CellContents) -> Optional[CellContents]:
    """Contents of the middle cell one step later, or None if the window is impossible."""
    heads = [cell for cell in (left, middle, right) if isinstance(cell, Head)]
    if len(heads) > 1:
        return None
    if not heads:
        return middle
    if isinstance(middle, Head):
        action = m.action(middle.state, middle.symbol)
        return None if action is None else action[1]
    neighbour = left if isinstance(left, Head) else right
    action = m.action(neighbour.state, neighbour.symbol)
    if action is None:
        return None
    target, _, direction = action
    arrives = (direction == MOVE_RIGHT) if neighbour is left else (direction == MOVE_LEFT)
    return Head(target, middle) if arrives else middle


# ===== COMPILER =====

def guess_table(m: TmDescription) -> Dict[CellContents, List[Window]]:
    """For each contents s, every window whose next_contents is s.

    The left component may be the off-tape sentinel (the left neighbour of
    cell 0); a sentinel left window is only used at counter zero.
    """
    cells = m.contents()
    table: Dict[CellContents, List[Window]] = defaultdict(list)
    for left in [OFF_TAPE] + cells:
        for middle in cells:
            for right in cells:
                result = next_contents(m, left, middle, right)
                if result is not None:
                    table[result].append((left, middle, right))
    return dict(table)


def _name(cell: CellContents) -> str:
    return str(cell)


def _window_name(window: Window) -> str:
    return " ".join(_name(cell) for cell in window)


def compile_tm_to_a1ca(m: TmDescription) -> A1caDescription:
    """Unary A1CA accepting u^{2n} iff m halts on the empty tape in exactly n steps."""
    violations = validate_tm(m)
    if violations:
        raise MachineValidationError(violations)
    table = guess_table(m)
    final, start = Head(m.halting, m.start_symbol), Head(m.initial, m.start_symbol)

    # Only contents reachable backwards from the halting cell get states
    reached = [final]
    seen = {final}
    for cell in reached:
        for window in table.get(cell, []):
            for neighbour in window:
                if neighbour != OFF_TAPE and neighbour not in seen:
                    seen.add(neighbour)
                    reached.append(neighbour)

    u, end = UNARY_SYMBOL, END_MARKER
    accept, reject = "accept", "reject"
    states = ["start", "begin"]
    universal = set()
    delta: Dict[str, Dict[str, Dict[str, Tuple[Tuple[str, int], ...]]]] = {}

    def both(targets):
        return {STATUS_ZERO: tuple(targets), STATUS_NONZERO: tuple(targets)}

    delta["start"] = {end: both([("begin", 0)])}
    delta["begin"] = {end: both([(f"guess {_name(final)}", 0)])}
    for cell in reached:
        guess, wait = f"guess {_name(cell)}", f"wait {_name(cell)}"
        windows = table.get(cell, [])
        states += [guess, wait]
        delta[guess] = {
            u: {
                STATUS_ZERO: tuple((f"pick {_window_name(w)}", 0) for w in windows if w[0] == OFF_TAPE),
                STATUS_NONZERO: tuple((f"pick {_window_name(w)}", 0) for w in windows if w[0] != OFF_TAPE),
            },
            end: {
                STATUS_ZERO: ((accept if cell == start else reject, 0),),
                STATUS_NONZERO: ((accept if cell == m.blank else reject, 0),),
            },
        }
        delta[wait] = {u: both([(guess, 0)]), end: both([(reject, 0)])}
        for window in windows:
            pick, hold = f"pick {_window_name(window)}", f"hold {_window_name(window)}"
            if pick in delta:
                continue
            left, middle, right = window
            branches = [] if left == OFF_TAPE else [(f"wait {_name(left)}", -1)]
            branches += [(f"wait {_name(middle)}", 0), (f"wait {_name(right)}", 1)]
            states += [pick, hold]
            universal.add(hold)
            delta[pick] = {u: both([(hold, 0)]), end: both([(reject, 0)])}
            delta[hold] = {u: both(branches), end: both([(reject, 0)])}
    states += [accept, reject]
    delta[accept] = {u: both([(accept, 0)]), end: both([(accept, 0)])}
    delta[reject] = {u: both([]), end: both([])}

    compiled = A1caDescription(
        alphabet=Alphabet((u,)),
        states=tuple(states),
        universal=frozenset(universal),
        initial="start",
        accepting=accept,
        delta=delta,
    )
    logger.info("✅ Compiled %d-state TM into a %d-state A1CA", len(m.states), len(states))
    return compiled


# ===== TM FILES =====

_NAME = {"type": "string"}
TM_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["states", "initial", "halting", "tape_alphabet", "delta"],
    "additionalProperties": False,
    "properties": {
        "states": {"type": "array", "items": _NAME},
        "initial": _NAME,
        "halting": _NAME,
        "tape_alphabet": {"type": "array", "items": _NAME},
        "start_symbol": _NAME,
        "blank": _NAME,
        "delta": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {
                    "type": "array",
                    "items": [_NAME, _NAME, {"enum": [MOVE_LEFT, MOVE_RIGHT]}],
                    "minItems": 3,
                    "maxItems": 3,
                },
            },
        },
    },
}


def parse_tm(text: str) -> TmDescription:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MachineSyntaxError(f"Invalid JSON: {e}")
    check_schema(obj, TM_SCHEMA, "Turing machine")
    m = TmDescription(
        states=tuple(obj["states"]),
        initial=obj["initial"],
        halting=obj["halting"],
        tape_alphabet=tuple(obj["tape_alphabet"]),
        delta={state: {symbol: tuple(action) for symbol, action in row.items()}
               for state, row in obj["delta"].items()},
        start_symbol=obj.get("start_symbol", START_SYMBOL),
        blank=obj.get("blank", BLANK_SYMBOL),
    )
    violations = validate_tm(m)
    if violations:
        raise MachineValidationError(violations)
    return m


def serialize_tm(m: TmDescription) -> str:
    return canonical_json({
        "states": list(m.states),
        "initial": m.initial,
        "halting": m.halting,
        "tape_alphabet": list(m.tape_alphabet),
        "start_symbol": m.start_symbol,
        "blank": m.blank,
        "delta": {state: {symbol: list(action) for symbol, action in row.items()} for state, row in m.delta.items()},
    })


def load_tm(path: Union[str, Path]) -> TmDescription:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"Turing machine file not found: {path}")
    return parse_tm(text)
