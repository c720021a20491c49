"""Command-line front end.

Exit codes: 0 when every executed check passed, 1 when a check failed or
was inconclusive, 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .commands import Settings, cmd_check, cmd_example, cmd_transform
from .definition import DefinitionError, load, parse_seed
from .output import Report, emit_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _positive(kind: str, minimum: int = 1):
    def conv(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{kind} must be an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{kind} must be at least {minimum}, got {value}")
        return value

    return conv


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--format", choices=("text", "json"), help="report format (default text)", **d)
    p.add_argument("--precision", type=_positive("precision", 64), metavar="BITS", help="working precision in bits", **d)
    p.add_argument("--samples", type=_positive("samples", 4), metavar="N", help="sample points per identity", **d)
    p.add_argument("--seed", type=_seed, metavar="HEX", help="sampling seed, hexadecimal", **d)
    p.add_argument("--timing", action="store_true", help="include per-check timings", **d)
    p.add_argument("-v", "--verbose", action="store_true", help="show every sub-check in text output", **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bihydro",
        description="Verify bihamiltonian systems of hydrodynamic type and their linear reciprocal transforms.",
    )
    _global_flags(parser, suppress=False)
    parser.set_defaults(format="text", precision=None, samples=None, seed=None, timing=False, verbose=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = sub.add_parser("check", parents=[common], help="structural checks of a system definition")
    p.add_argument("file")
    p = sub.add_parser("transform", parents=[common], help="apply the definition's reciprocal transformation")
    p.add_argument("file")
    p = sub.add_parser("example", parents=[common], help="run a built-in example end to end")
    p.add_argument("name", choices=("kdv", "toda"))
    p.add_argument("--m", type=_positive("m"), default=1, help="KdV flow index, m >= 1 (default 1)")
    p.add_argument("--k", type=_positive("k"), default=1, help="KdV commuting flow index, k >= 1 (default 1)")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Return ``(exit code, report bytes, error text)``.

    Only argparse usage errors and ``--help`` are written directly to the real streams.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), b"", ""
    settings = Settings(args.precision, args.samples, args.seed)
    try:
        if args.command == "example":
            report = cmd_example(args.name, args.m, args.k, settings)
        else:
            defn = load(args.file)
            report = (cmd_check if args.command == "check" else cmd_transform)(defn, settings)
    except DefinitionError as exc:
        return EXIT_INPUT, b"", f"bihydro: error: {exc}\n"
    except ValueError as exc:
        # bad zero-test overrides and similar input-level problems
        return EXIT_INPUT, b"", f"bihydro: error: {exc}\n"
    out = emit_report(report, args.format, timing=args.timing, verbose=args.verbose)
    return report.exit_code, out, ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    if err:
        sys.stderr.write(err)
    return code


__all__ = ["DefinitionError", "Report", "build_parser", "emit_report", "load", "main", "run"]
