#!/usr/bin/env python3
"""
Utility functions for the workbench CLI tools
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple, Union

from cli.exact import format_rational
from cli.tape import Alphabet, check_word

logger = logging.getLogger(__name__)

EMPTY_WORD_SPELLINGS = ("", "ε")


def validate_input_file(path: Union[str, Path]) -> Tuple[bool, Optional[str]]:
    """
    Validate that a path names a readable JSON file

    Args:
        path: Path to machine or Turing-machine file

    Returns:
        tuple: (is_valid, error_message)
    """
    path = Path(path)

    if not path.exists():
        return False, f"File not found: {path}"

    if not path.is_file():
        return False, f"Not a file: {path}"

    if path.suffix != '.json':
        return False, f"Not a .json file: {path}"

    return True, None


def validate_output_path(path: Union[str, Path]) -> Tuple[bool, Optional[str]]:
    """
    Validate that a machine file can be written at ``path``

    Args:
        path: Destination file

    Returns:
        tuple: (is_valid, error_message)
    """
    path = Path(path)

    if path.exists() and path.is_dir():
        return False, f"Output path is a directory: {path}"

    for parent in path.parents:
        if parent.exists():
            if not parent.is_dir():
                return False, f"Parent is not a directory: {parent}"
            break

    return True, None


def read_text_file(path: Union[str, Path]) -> str:
    """
    Read a UTF-8 text file

    Args:
        path: File to read

    Returns:
        str: File contents

    Raises:
        ValueError: the file is missing or not a regular file
    """
    is_valid, error = validate_input_file(path)
    if not is_valid:
        raise ValueError(error)
    return Path(path).read_text(encoding='utf-8')


def write_text_file(path: Union[str, Path], text: str) -> Path:
    """
    Write a UTF-8 text file, creating parent directories

    Args:
        path: Destination file
        text: Contents

    Returns:
        Path: The written path
    """
    is_valid, error = validate_output_path(path)
    if not is_valid:
        raise ValueError(error)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.debug("Wrote %d characters to %s", len(text), path)
    return path


def parse_word(alphabet: Alphabet, text: str) -> str:
    """
    Turn a command-line word argument into a word over ``alphabet``

    The empty string and "ε" both mean the empty word (unless ε is itself a
    symbol of the alphabet).

    Raises:
        SymbolError: a symbol is outside the alphabet
    """
    if text in EMPTY_WORD_SPELLINGS and text not in alphabet:
        return ""
    check_word(alphabet, text)
    return text


def format_probability(value: Fraction) -> str:
    """Exact probability as "p/q"."""
    return format_rational(value)


def format_violations(violations: List[str]) -> List[str]:
    """One indented bullet line per violation."""
    return [f"  - {violation}" for violation in violations]
