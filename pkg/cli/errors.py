"""Error types raised by the workbench.

Every error derives from ValueError so callers that already guard
``ValueError`` (the CLI does) keep working. Validators never raise; they
return violation lists and the parsers wrap those lists in
MachineValidationError.
"""

from typing import List, Optional


class MachineFormatError(ValueError):
    """Base class for machine-file problems."""


class MachineSyntaxError(MachineFormatError):
    """The text is not well-formed JSON."""


class MachineSchemaError(MachineFormatError):
    """A field is missing, unknown, or has the wrong JSON type."""


class MachineValidationError(MachineFormatError):
    """The description parsed but breaks a kind-specific invariant."""

    def __init__(self, violations: List[str], message: Optional[str] = None):
        self.violations = list(violations)
        if message is None:
            message = f"{len(self.violations)} validation error(s): " + "; ".join(self.violations)
        super().__init__(message)


class AlgebraicAmplitudeError(MachineValidationError):
    """An amplitude is not an exact rational (e.g. written with sqrt)."""

    def __init__(self, text: str):
        super().__init__(
            [f"amplitude {text!r} is not rational; algebraic amplitudes are not supported "
             f"(deciding them needs QFA minimization)"]
        )
        self.text = text


class SymbolError(ValueError):
    """A word uses a symbol outside the machine's alphabet."""


class TuringMachineError(ValueError):
    """Malformed Turing machine or an illegal move during simulation."""


class DimensionError(ValueError):
    """Matrix, density or vector sizes do not line up."""
