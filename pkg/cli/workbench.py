#!/usr/bin/env python3
"""
Realtime Alternation Workbench

Command-line front end for the machine models: run words, enumerate
accepted words, decide or sweep emptiness, compile Turing machines, write
the built-in constructions and validate machine files.

Usage:
    python3 cli/workbench.py build upower -o out/upower.json
    python3 cli/workbench.py run out/upower.json 1111
    python3 cli/workbench.py build twin -o out/twin.json
    python3 cli/workbench.py run out/twin.json 01c01 --tree twin.gv
    python3 cli/workbench.py enumerate configs/afa_has_ab.json --max-len 3
    python3 cli/workbench.py run configs/rotation_nqfa.json aa --mode uqfa
    python3 cli/workbench.py emptiness configs/zero_nqfa.json
    python3 cli/workbench.py emptiness out/twin.json --bounded 5
    python3 cli/workbench.py compile-tm configs/tm_write2.json -o out/write2.json
    python3 cli/workbench.py check out/upower.json

Exit codes:
    0  accept / empty / success
    1  reject / nonempty / witness found
    2  usage, file or validation error
"""

import argparse
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, TextIO

# Allow running as a script from the repository root
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli.alternating import a1ca_accepts, afa_accepts, alt_tree, bounded_emptiness
from cli.computation_tree import TreeNode, export_tree_dot
from cli.constants import (
    BUILTIN_MACHINES,
    DEFAULT_ENUM_LENGTH,
    EXIT_ACCEPT,
    EXIT_ERROR,
    EXIT_REJECT,
)
from cli.errors import MachineValidationError
from cli.machine_format import MachineDescription, parse_machine, serialize_machine, validate
from cli.private_alternation import accepting_strategy, pafa_tree
from cli.private_machines import build_twin, build_upower, build_usquare_pa1ca
from cli.quantum import nqfa_accepts, nqfa_emptiness, qfa_accept_probability, uqfa_accepts
from cli.quantum_alternating import aqfa_accepts, aqfa_tree, build_usquare_aqfa, wrap_qfa_as_aqfa
from cli.tape import Verdict, enumerate_words, format_word
from cli.turing_compiler import compile_tm_to_a1ca, parse_tm, tm_check_assumptions, tm_run
from cli.utils import (
    format_probability,
    format_violations,
    parse_word,
    read_text_file,
    write_text_file,
)

logger = logging.getLogger(__name__)

QFA_MODES = ("nqfa", "uqfa")

BUILDERS: Dict[str, Callable[[], object]] = {
    "upower": build_upower,
    "twin": build_twin,
    "usquare-pa1ca": build_usquare_pa1ca,
    "usquare-aqfa": build_usquare_aqfa,
}


class UsageError(ValueError):
    """Bad command line; reported with the usage text."""


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad arguments."""

    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def setup_logging(verbose: bool = False, quiet: bool = False, stream: Optional[TextIO] = None) -> None:
    """Configure logging based on verbosity level.

    Args:
        verbose: Enable DEBUG level logging
        quiet: Enable WARNING level logging only
        stream: Where log lines go (stderr by default)
    """
    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format='%(message)s',
        stream=stream if stream is not None else sys.stderr,
        force=True
    )


def setup_argument_parser() -> argparse.ArgumentParser:
    """Create the parser with one subcommand per workbench operation.

    Returns:
        argparse.ArgumentParser: Configured argument parser
    """
    parser = WorkbenchArgumentParser(
        prog="workbench",
        description="Simulate and decide realtime alternating automata",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Membership of 1^4 in the power-of-two language
  python3 cli/workbench.py build upower -o out/upower.json
  python3 cli/workbench.py run out/upower.json 1111

  # Exact emptiness of a quantum automaton
  python3 cli/workbench.py emptiness configs/zero_nqfa.json

  # Compile a Turing machine into a counter automaton
  python3 cli/workbench.py compile-tm configs/tm_write2.json -o out/write2.json
        """
    )
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose output (DEBUG level logging)')
    parser.add_argument('--quiet', '-q', action='store_true',
                        help='Minimize output (WARNING level logging only)')

    commands = parser.add_subparsers(dest='command', metavar='<command>')
    commands.required = True

    run = commands.add_parser('run', help='Decide membership of one word')
    run.add_argument('machine', help='Machine file (JSON)')
    run.add_argument('word', help='Input word ("" for the empty word)')
    run.add_argument('--tree', metavar='FILE', help='Write the evaluated computation tree as DOT')
    run.add_argument('--mode', choices=QFA_MODES, default='nqfa',
                     help='Acceptance mode for qfa files (default: nqfa)')

    enum = commands.add_parser('enumerate', help='List accepted words in shortlex order')
    enum.add_argument('machine', help='Machine file (JSON)')
    enum.add_argument('--max-len', type=int, default=DEFAULT_ENUM_LENGTH, metavar='L',
                      help=f'Longest word to try (default: {DEFAULT_ENUM_LENGTH})')
    enum.add_argument('--mode', choices=QFA_MODES, default='nqfa',
                      help='Acceptance mode for qfa files (default: nqfa)')

    empty = commands.add_parser('emptiness', help='Decide (qfa) or sweep emptiness')
    empty.add_argument('machine', help='Machine file (JSON)')
    empty.add_argument('--bounded', type=int, metavar='L',
                       help='Search words up to length L instead of deciding (not conclusive)')
    empty.add_argument('--mode', choices=QFA_MODES, default='nqfa',
                       help='Acceptance mode for qfa files; uqfa needs --bounded (default: nqfa)')

    compile_tm = commands.add_parser('compile-tm', help='Compile a Turing machine into a unary A1CA')
    compile_tm.add_argument('tm', help='Turing machine file (JSON)')
    compile_tm.add_argument('-o', '--output', required=True, help='Output machine file')

    build = commands.add_parser('build', help='Write a built-in construction')
    build.add_argument('name', choices=BUILTIN_MACHINES, help='Construction to build')
    build.add_argument('-o', '--output', required=True, help='Output machine file')

    check = commands.add_parser('check', help='Validate a machine file')
    check.add_argument('machine', help='Machine file (JSON)')

    return parser


# ===== MACHINE SEMANTICS =====

def acceptor(m: MachineDescription, mode: str = 'nqfa') -> Callable[[str], Verdict]:
    """The membership decider for a machine's kind."""
    payload = m.payload
    if m.kind == 'afa':
        return lambda word: afa_accepts(payload, word)
    if m.kind == 'a1ca':
        return lambda word: a1ca_accepts(payload, word)
    if m.kind in ('pafa', 'pa1ca'):
        return lambda word: Verdict.of(accepting_strategy(payload, word) is not None)
    if m.kind == 'qfa':
        if mode == 'uqfa':
            return lambda word: uqfa_accepts(payload, word)
        return lambda word: nqfa_accepts(payload, word)
    return lambda word: aqfa_accepts(payload, word)


def computation_tree(m: MachineDescription, word: str, mode: str = 'nqfa') -> TreeNode:
    """Evaluated tree for ``run --tree``; a qfa is shown through its AQFA wrapper."""
    if m.kind in ('afa', 'a1ca'):
        return alt_tree(m.payload, word)
    if m.kind in ('pafa', 'pa1ca'):
        return pafa_tree(m.payload, word)
    if m.kind == 'qfa':
        return aqfa_tree(wrap_qfa_as_aqfa(m.payload, universal=(mode == 'uqfa')), word)
    return aqfa_tree(m.payload, word)


def load(path: str) -> MachineDescription:
    return parse_machine(read_text_file(path))


# ===== SUBCOMMANDS =====

def cmd_run(args: argparse.Namespace, out: TextIO) -> int:
    m = load(args.machine)
    word = parse_word(m.alphabet, args.word)
    verdict = acceptor(m, args.mode)(word)
    if m.kind == 'qfa':
        probability = qfa_accept_probability(m.payload, word)
        logger.info("P_accept(%s) = %s", format_word(word), format_probability(probability))
    if args.tree:
        tree = computation_tree(m, word, args.mode)
        write_text_file(args.tree, export_tree_dot(tree))
        logger.info("✅ Wrote computation tree (%d nodes) to %s", tree.size(), args.tree)
    print(verdict, file=out)
    return EXIT_ACCEPT if verdict.accepted else EXIT_REJECT


def cmd_enumerate(args: argparse.Namespace, out: TextIO) -> int:
    if args.max_len < 0:
        raise UsageError(f"--max-len must be nonnegative, got {args.max_len}")
    m = load(args.machine)
    accepts = acceptor(m, args.mode)
    count = 0
    for word in enumerate_words(m.alphabet, args.max_len):
        if accepts(word).accepted:
            print(word, file=out)
            count += 1
    logger.info("✅ %d accepted word(s) of length ≤ %d", count, args.max_len)
    return EXIT_ACCEPT


def cmd_emptiness(args: argparse.Namespace, out: TextIO) -> int:
    m = load(args.machine)
    if args.bounded is None:
        if m.kind != 'qfa' or args.mode == 'uqfa':
            what = f"{m.kind} machines" if m.kind != 'qfa' else "qfa machines in uqfa mode"
            raise UsageError(
                f"emptiness is undecidable for {what}; "
                f"pass --bounded L for a non-conclusive search"
            )
        verdict = nqfa_emptiness(m.payload)
        print(verdict, file=out)
        return EXIT_ACCEPT if verdict.empty else EXIT_REJECT

    if args.bounded < 0:
        raise UsageError(f"--bounded must be nonnegative, got {args.bounded}")
    witness = bounded_emptiness(acceptor(m, args.mode), m.alphabet, args.bounded)
    if witness is None:
        logger.warning("⚠️  No witness up to length %d; longer words were not examined", args.bounded)
        print(f"NO WITNESS ≤ {args.bounded}", file=out)
        return EXIT_ACCEPT
    print(f"NONEMPTY {format_word(witness)}", file=out)
    return EXIT_REJECT


def cmd_compile_tm(args: argparse.Namespace, out: TextIO) -> int:
    tm = parse_tm(read_text_file(args.tm))
    problems = tm_check_assumptions(tm)
    for problem in problems:
        logger.warning("⚠️  %s", problem)
    if not problems:
        result = tm_run(tm)
        if result.halted:
            logger.info("Halts after %d steps; the compiled machine accepts u^%d", result.steps, 2 * result.steps)
        else:
            logger.info("No halt within %d steps", result.steps)
    compiled = compile_tm_to_a1ca(tm)
    write_text_file(args.output, serialize_machine(compiled))
    logger.info("✅ Wrote %s", args.output)
    return EXIT_ACCEPT


def cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    machine = BUILDERS[args.name]()
    write_text_file(args.output, serialize_machine(machine))
    logger.info("✅ Built %s -> %s", args.name, args.output)
    return EXIT_ACCEPT


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    m = load(args.machine)
    violations = validate(m)
    if violations:
        raise MachineValidationError(violations)
    print(f"OK {m.kind}", file=out)
    return EXIT_ACCEPT


COMMANDS: Dict[str, Callable[[argparse.Namespace, TextIO], int]] = {
    'run': cmd_run,
    'enumerate': cmd_enumerate,
    'emptiness': cmd_emptiness,
    'compile-tm': cmd_compile_tm,
    'build': cmd_build,
    'check': cmd_check,
}


def report_error(error: Exception, err: TextIO) -> None:
    """Print ``❌ message`` and, for validation errors, each violation."""
    if isinstance(error, MachineValidationError):
        print(f"❌ {len(error.violations)} validation error(s):", file=err)
        for line in format_violations(error.violations):
            print(line, file=err)
    else:
        print(f"❌ {error}", file=err)


def dispatch(argv: List[str], stdout: TextIO, stderr: TextIO) -> int:
    """Run one subcommand and return its exit code."""
    parser = setup_argument_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=stderr)
        return EXIT_ERROR
    except SystemExit as e:  # --help
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    setup_logging(verbose=args.verbose, quiet=args.quiet, stream=stderr)

    try:
        return COMMANDS[args.command](args, stdout)
    except (ValueError, OSError) as e:
        report_error(e, stderr)
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
