"""Configuration constants for the realtime alternation workbench.

This module centralizes reserved symbols, machine-file vocabulary, label
alphabets used by the built-in constructions, and default limits shared
across the CLI tools.
"""

# ===== TAPE AND FILE FORMAT =====

# Reserved end-marker; never part of an input alphabet
END_MARKER = "¢"
END_KEY = "@end"  # how machine files spell the end-marker

FORMAT_VERSION = 1  # the only "format" value machine files may carry

# Machine kinds understood by parse_machine/serialize_machine
MACHINE_KINDS = ("afa", "a1ca", "pafa", "pa1ca", "qfa", "aqfa")

# Counter status names used by A1CA / PA1CA transition tables
STATUS_ZERO = "zero"
STATUS_NONZERO = "nonzero"
COUNTER_STATUSES = (STATUS_ZERO, STATUS_NONZERO)
COUNTER_UPDATES = (-1, 0, 1)

# Separator for composite keys ("c|p", "s|symbol|k") in machine files
KEY_SEPARATOR = "|"

# ===== TURING MACHINES =====

START_SYMBOL = "▷"
BLANK_SYMBOL = "_"
MOVE_LEFT = "L"
MOVE_RIGHT = "R"
OFF_TAPE = "#off"  # left neighbour of cell 0 in compiled guess tables
UNARY_SYMBOL = "u"  # input letter of compiled counter machines

DEFAULT_MAX_STEPS = 1000  # simulation horizon for tm_run / tm_check_assumptions

# ===== BUILT-IN CONSTRUCTIONS =====

# Private game alphabet shared by the built-in private machines
PRIVATE_LABELS = ("d0", "d1")

# UPOWER certificate: "u1" marks a checkpoint position
UPOWER_LABELS = ("u0", "u1")
# TWIN certificate alphabet
TWIN_LABELS = ("0", "1", "c")
# USQUARE segment alphabet
USQUARE_LABELS = ("1", "#")

BUILTIN_MACHINES = ("upower", "twin", "usquare-pa1ca", "usquare-aqfa")

# ===== ENUMERATION AND SEARCH =====

DEFAULT_ENUM_LENGTH = 6  # default --max-len for `enumerate`
MAX_COMPLETION_SCALE = 64  # largest scaling tried by complete_superoperator

# ===== EXIT CODES =====

EXIT_ACCEPT = 0  # accept / empty / success
EXIT_REJECT = 1  # reject / nonempty / witness found
EXIT_ERROR = 2  # usage, file or validation error

# ===== EXPORT CONSTANTS =====

__all__ = [
    # Tape and format
    'END_MARKER',
    'END_KEY',
    'FORMAT_VERSION',
    'MACHINE_KINDS',
    'STATUS_ZERO',
    'STATUS_NONZERO',
    'COUNTER_STATUSES',
    'COUNTER_UPDATES',
    'KEY_SEPARATOR',
    # Turing machines
    'START_SYMBOL',
    'BLANK_SYMBOL',
    'MOVE_LEFT',
    'MOVE_RIGHT',
    'OFF_TAPE',
    'UNARY_SYMBOL',
    'DEFAULT_MAX_STEPS',
    # Constructions
    'PRIVATE_LABELS',
    'UPOWER_LABELS',
    'TWIN_LABELS',
    'USQUARE_LABELS',
    'BUILTIN_MACHINES',
    # Enumeration
    'DEFAULT_ENUM_LENGTH',
    'MAX_COMPLETION_SCALE',
    # Exit codes
    'EXIT_ACCEPT',
    'EXIT_REJECT',
    'EXIT_ERROR',
]
