#!/usr/bin/env python3
"""
Machine File Format

Reads, validates and writes the JSON machine files shared by every model:

    {"format": 1, "kind": "afa" | "a1ca" | "pafa" | "pa1ca" | "qfa" | "aqfa",
     "alphabet": [symbols], "machine": {kind-specific fields}}

Parsing happens in three stages, each with its own error type:
    1. JSON syntax           -> MachineSyntaxError
    2. JSON Schema (Draft 7) -> MachineSchemaError
    3. kind invariants       -> MachineValidationError (all violations at once)

Serialization is canonical: keys sorted, two-space indent, UTF-8 text and a
trailing newline, so serialize(parse(serialize(m))) reproduces the same text
byte for byte.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Union

from jsonschema import Draft7Validator

from cli.alternating import (
    A1caDescription,
    AfaDescription,
    a1ca_from_json,
    a1ca_to_json,
    afa_from_json,
    afa_to_json,
    validate_a1ca,
    validate_afa,
)
from cli.constants import COUNTER_STATUSES, FORMAT_VERSION, MACHINE_KINDS
from cli.errors import MachineSchemaError, MachineSyntaxError, MachineValidationError
from cli.private_alternation import (
    Pa1caDescription,
    PafaDescription,
    pa1ca_from_json,
    pa1ca_to_json,
    pafa_from_json,
    pafa_to_json,
    validate_pa1ca,
    validate_pafa,
)
from cli.quantum import QfaDescription, qfa_from_json, qfa_to_json, validate_qfa
from cli.quantum_alternating import AqfaDescription, aqfa_from_json, aqfa_to_json, validate_aqfa
from cli.tape import Alphabet, alphabet_violations

logger = logging.getLogger(__name__)


# ===== JSON SCHEMAS =====

_NAME = {"type": "string"}
_NAMES = {"type": "array", "items": _NAME}
_PAIR = {"type": "array", "items": [_NAME, _NAME], "minItems": 2, "maxItems": 2}


def _table(values: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "additionalProperties": values}


def _record(required: List[str], properties: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "required": required, "properties": properties, "additionalProperties": False}


_AMPLITUDE = {"type": "array", "items": [_NAME, _NAME], "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _AMPLITUDE}}
_SUPEROPERATOR = {"type": "array", "items": _MATRIX, "minItems": 1}

_A1CA_TARGET = {"type": "array", "items": [_NAME, {"type": "integer"}], "minItems": 2, "maxItems": 2}
_PA1CA_TARGET = {"type": "array", "items": [_NAME, _NAME, {"type": "integer"}], "minItems": 3, "maxItems": 3}


def _private_schema(target: Dict[str, Any], status_split: bool) -> Dict[str, Any]:
    moves = _table(target)
    entry = moves
    if status_split:
        entry = {"anyOf": [_record(list(COUNTER_STATUSES), {s: moves for s in COUNTER_STATUSES}), moves]}
    return _record(
        ["common_states", "private_states", "universal", "gamma", "delta_priv",
         "initial", "accept", "reject", "deltaE", "deltaU"],
        {
            "common_states": _NAMES,
            "private_states": _NAMES,
            "universal": {"type": "array", "items": _PAIR},
            "gamma": _NAMES,
            "delta_priv": _NAMES,
            "initial": _PAIR,
            "accept": _NAME,
            "reject": _NAME,
            "deltaE": _table(_table(_NAME)),
            "deltaU": _table(_table(entry)),
        },
    )


KIND_SCHEMAS: Dict[str, Dict[str, Any]] = {
    "afa": _record(
        ["states", "universal", "initial", "accepting", "delta"],
        {"states": _NAMES, "universal": _NAMES, "initial": _NAME, "accepting": _NAME,
         "delta": _table(_table(_NAMES))},
    ),
    "a1ca": _record(
        ["states", "universal", "initial", "accepting", "delta"],
        {"states": _NAMES, "universal": _NAMES, "initial": _NAME, "accepting": _NAME,
         "delta": _table(_table(_record([], {s: {"type": "array", "items": _A1CA_TARGET}
                                             for s in COUNTER_STATUSES})))},
    ),
    "pafa": _private_schema(_PAIR, status_split=False),
    "pa1ca": _private_schema(_PA1CA_TARGET, status_split=True),
    "qfa": _record(
        ["basis", "initial", "accept", "ops"],
        {"basis": _NAMES, "initial": _NAME, "accept": _NAMES, "reject": _NAMES,
         "ops": _table(_SUPEROPERATOR)},
    ),
    "aqfa": _record(
        ["classical_states", "universal", "classical_initial", "classical_accept",
         "basis", "initial", "ops", "cdelta"],
        {"classical_states": _NAMES, "universal": _NAMES, "classical_initial": _NAME,
         "classical_accept": _NAMES, "basis": _NAMES, "initial": _NAME,
         "ops": _table(_SUPEROPERATOR), "cdelta": _table(_NAME)},
    ),
}

FILE_SCHEMA: Dict[str, Any] = _record(
    ["kind", "alphabet", "machine"],
    {
        "format": {"const": FORMAT_VERSION},
        "kind": {"enum": list(MACHINE_KINDS)},
        "alphabet": _NAMES,
        "machine": {"type": "object"},
    },
)


def check_schema(obj: Any, schema: Dict[str, Any], what: str) -> None:
    """Raise MachineSchemaError for the first schema error (by path) in ``obj``."""
    errors = sorted(Draft7Validator(schema).iter_errors(obj), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        error = errors[0]
        location = "/".join(str(part) for part in error.absolute_path) or "(top level)"
        raise MachineSchemaError(f"Invalid {what} at {location}: {error.message}")


# ===== KIND REGISTRY =====

Payload = Union[AfaDescription, A1caDescription, PafaDescription, Pa1caDescription,
                QfaDescription, AqfaDescription]


class KindCodec(NamedTuple):
    description: type
    from_json: Callable[[Alphabet, Dict[str, Any]], Any]
    to_json: Callable[[Any], Dict[str, Any]]
    validate: Callable[[Any], List[str]]


KINDS: Dict[str, KindCodec] = {
    "afa": KindCodec(AfaDescription, afa_from_json, afa_to_json, validate_afa),
    "a1ca": KindCodec(A1caDescription, a1ca_from_json, a1ca_to_json, validate_a1ca),
    "pafa": KindCodec(PafaDescription, pafa_from_json, pafa_to_json, validate_pafa),
    "pa1ca": KindCodec(Pa1caDescription, pa1ca_from_json, pa1ca_to_json, validate_pa1ca),
    "qfa": KindCodec(QfaDescription, qfa_from_json, qfa_to_json, validate_qfa),
    "aqfa": KindCodec(AqfaDescription, aqfa_from_json, aqfa_to_json, validate_aqfa),
}


def kind_of(payload: Payload) -> str:
    for kind, codec in KINDS.items():
        if type(payload) is codec.description:
            return kind
    raise TypeError(f"Not a machine description: {type(payload).__name__}")


@dataclass(frozen=True)
class MachineDescription:
    """A machine of any kind together with its kind tag."""

    kind: str
    payload: Payload

    @classmethod
    def wrap(cls, payload: Payload) -> "MachineDescription":
        return cls(kind_of(payload), payload)

    @property
    def alphabet(self) -> Alphabet:
        return self.payload.alphabet


# ===== PARSE / SERIALIZE / VALIDATE =====

def validate(m: Union[MachineDescription, Payload]) -> List[str]:
    """All invariant violations of a machine (empty list when valid)."""
    if not isinstance(m, MachineDescription):
        m = MachineDescription.wrap(m)
    return alphabet_violations(m.alphabet.symbols) + KINDS[m.kind].validate(m.payload)


def parse_machine(text: str) -> MachineDescription:
    """Parse machine-file text.

    Raises:
        MachineSyntaxError: malformed JSON
        MachineSchemaError: missing/unknown fields or wrong JSON types
        MachineValidationError: kind-specific invariants broken
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MachineSyntaxError(f"Invalid JSON: {e}")
    check_schema(obj, FILE_SCHEMA, "machine file")
    kind = obj["kind"]
    check_schema(obj["machine"], KIND_SCHEMAS[kind], f"{kind} machine")

    problems = alphabet_violations(obj["alphabet"])
    if problems:
        raise MachineValidationError(problems)
    codec = KINDS[kind]
    payload = codec.from_json(Alphabet(tuple(obj["alphabet"])), obj["machine"])
    violations = codec.validate(payload)
    if violations:
        raise MachineValidationError(violations)
    logger.debug("Parsed %s machine over %s", kind, "".join(obj["alphabet"]))
    return MachineDescription(kind, payload)


def machine_to_json(m: Union[MachineDescription, Payload]) -> Dict[str, Any]:
    if not isinstance(m, MachineDescription):
        m = MachineDescription.wrap(m)
    return {
        "format": FORMAT_VERSION,
        "kind": m.kind,
        "alphabet": list(m.alphabet.symbols),
        "machine": KINDS[m.kind].to_json(m.payload),
    }


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_machine(m: Union[MachineDescription, Payload]) -> str:
    """Canonical machine-file text."""
    return canonical_json(machine_to_json(m))


def load_machine(path: Union[str, Path]) -> MachineDescription:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"Machine file not found: {path}")
    return parse_machine(text)


def save_machine(m: Union[MachineDescription, Payload], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_machine(m), encoding="utf-8")
    logger.debug("Wrote %s", path)
