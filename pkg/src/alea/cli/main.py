"""Command-line entry point.

    alea analyze FILE          exact distribution, mean and type
    alea sample FILE           pseudo-random trials and their frequencies
    alea check FILE            parse and type-check only
    alea repl                  interactive session
    alea builtins              table of built-in functions

``-e EXPR`` replaces FILE by an inline program.  Exit status is 0 on success,
1 for an error in the program (syntax, type or evaluation) and 2 for a usage
error such as a missing file.
"""

from __future__ import annotations

import argparse
import sys

from .. import compile as compile_program
from ..builtins import builtin_table
from ..engine import DEFAULT_SEED, eval_dist, sample
from ..errors import AleaError
from ..values import render
from . import records, repl
from .render import analysis_report, frequency_table

EXIT_OK, EXIT_PROGRAM, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alea", description="Exact analysis and simulation of random experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source_args(p):
        p.add_argument("file", nargs="?", help="program file (.alea)")
        p.add_argument("-e", "--expr", help="inline program instead of a file")
        p.add_argument("--ascii", action="store_true", help="ASCII spellings for brackets and approximations")

    a = sub.add_parser("analyze", help="exact distribution of a program")
    source_args(a)
    a.add_argument("--format", choices=["table", "records"], default="table")
    a.add_argument("--literal", action="store_true",
                   help="apply the evaluation rules literally, without the shortcuts (slow)")

    s = sub.add_parser("sample", help="pseudo-random trials")
    source_args(s)
    s.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help=f"generator seed (default {DEFAULT_SEED:#x})")
    s.add_argument("--trials", type=_positive, default=1)
    s.add_argument("--format", choices=["table", "records"], default="table")
    s.add_argument("--show-trials", action="store_true", help="list every trial in table format")

    c = sub.add_parser("check", help="parse and type-check")
    source_args(c)

    r = sub.add_parser("repl", help="interactive session")
    r.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    r.add_argument("--ascii", action="store_true")

    sub.add_parser("builtins", help="list built-in functions and distributions")
    return parser


def _source(args) -> str:
    if args.expr is not None and args.file is not None:
        raise UsageError("give either a file or -e, not both")
    if args.expr is not None:
        return args.expr
    if args.file is None:
        raise UsageError("no program given (pass a file or -e EXPR)")
    if args.file == "-":
        return sys.stdin.read()
    try:
        with open(args.file, encoding="utf-8") as f:
            return f.read()
    except OSError as err:
        raise UsageError(f"cannot read {args.file}: {err.strerror}") from None


def _analyze(args, out) -> None:
    prog = compile_program(_source(args))
    d = eval_dist({}, prog.expr, fast=not args.literal)
    if args.format == "records":
        out.write("".join(line + "\n" for line in records.dist_records(d)))
    else:
        print(analysis_report(d, str(prog.type), args.ascii), file=out)


def _sample(args, out) -> None:
    prog = compile_program(_source(args))
    values = sample({}, prog.expr, args.trials, args.seed)
    if args.format == "records":
        lines = records.trial_records(values) + records.frequency_records(values)
        out.write("".join(line + "\n" for line in lines))
        return
    print(f"type: {prog.type}", file=out)
    print(f"seed: {args.seed:#x}, trials: {args.trials}", file=out)
    if args.show_trials:
        for i, v in enumerate(values, 1):
            print(f"{i}: {render(v, args.ascii)}", file=out)
    print(frequency_table(values, args.ascii), file=out)


def _check(args, out) -> None:
    prog = compile_program(_source(args))
    kind = "deterministic" if prog.deterministic else "random"
    print(f"ok: {prog.type} ({kind})", file=out)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_OK if exit_.code == 0 else EXIT_USAGE
    try:
        if args.command == "analyze":
            _analyze(args, out)
        elif args.command == "sample":
            _sample(args, out)
        elif args.command == "check":
            _check(args, out)
        elif args.command == "repl":
            return repl.run(sys.stdin, out, args.seed, args.ascii)
        elif args.command == "builtins":
            print(builtin_table(), file=out)
    except UsageError as err:
        print(f"alea: {err}", file=sys.stderr)
        return EXIT_USAGE
    except AleaError as err:
        print(f"alea: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_PROGRAM
    return EXIT_OK
