"""Realtime alternation workbench package.

This package implements, simulates and (where decidable) decides
properties of realtime alternating automata: classical alternating
(one-counter) automata, private alternating automata and quantum
alternating automata.

Main modules:
    - workbench: Command-line front end (run, enumerate, emptiness, ...)
    - machine_format: Machine-file parsing, validation and serialization
    - alternating: AFA / A1CA evaluation
    - turing_compiler: Turing machine to unary A1CA compilation
    - private_alternation: PAFA / PA1CA strategy search and checking
    - private_machines: Built-in private constructions
    - quantum: QFA simulation, equivalence and emptiness
    - quantum_alternating: AQFA evaluation and constructions
    - exact: Exact Gaussian-rational matrix arithmetic
    - tape: Alphabets, words and verdicts
    - computation_tree: Evaluated trees and DOT export
    - utils: Shared file and formatting helpers
"""

from .machine_format import MachineDescription, load_machine, parse_machine, save_machine, serialize_machine, validate
from .tape import Alphabet, EmptinessVerdict, Verdict

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "EmptinessVerdict",
    "MachineDescription",
    "Verdict",
    "load_machine",
    "parse_machine",
    "save_machine",
    "serialize_machine",
    "validate",
]
