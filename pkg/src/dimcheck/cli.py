"""Command-line entry point.

Subcommands: ``check`` (statically check a program file), ``eval``
(evaluate one expression), ``convert`` (unit conversion), ``units`` (list
the registry), ``currency run`` (replay a settlement scenario), and
``selftest`` (the randomized property suite).

Exit codes: 0 success, 1 failed checks/asserts/properties, 2 usage or
I/O errors.  Diagnostics go to standard error as
``<file>:<line>:<col>: <kind>: <message>``.  The environment variable
``DIMCHECK_REGISTRY`` (or ``--registry``) selects a registry file instead
of the built-in units.
"""

from __future__ import annotations

import argparse
import os
import sys

from .decvalue import DecimalParseError, DecValue, PrecisionContext
from .measure import (
    DimensionMismatchError,
    UnitError,
    UnitRegistry,
    default_registry,
    load_registry,
)
from . import currency, quantlang
from .selftest import run_selftest

__all__ = ["main"]


def _common_options(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--registry",
        metavar="FILE",
        help="registry file (default: $DIMCHECK_REGISTRY or built-in units)",
    )
    parser.add_argument(
        "--precision",
        type=int,
        metavar="N",
        help="significant digits for arithmetic (default 34)",
    )
    parser.add_argument(
        "--format",
        choices=("plain", "machine"),
        default="plain",
        help="output style; machine is one tab-separated verdict per line",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimcheck",
        description="dimension-checked measurement arithmetic and checking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="statically check a program file")
    p.add_argument("file")
    _common_options(p)

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("expression")
    p.add_argument("--in", dest="in_unit", metavar="UNIT", help="convert the result into UNIT")
    _common_options(p)

    p = sub.add_parser("convert", help="convert a value between units")
    p.add_argument("number")
    p.add_argument("source")
    p.add_argument("target")
    _common_options(p)

    p = sub.add_parser("units", help="list the registry")
    _common_options(p)

    p = sub.add_parser("currency", help="settlement engine commands")
    csub = p.add_subparsers(dest="currency_command", required=True)
    run = csub.add_parser("run", help="replay a scenario file ('random' for a generated trace)")
    run.add_argument("scenario")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trace", action="store_true", help="print a state digest after each event")
    _common_options(run)

    p = sub.add_parser("selftest", help="run the randomized property suite")
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _common_options(p)

    return parser


def _diag(file: str, line: int, col: int, kind: str, message: str):
    print(f"{file}:{line}:{col}: {kind}: {message}", file=sys.stderr)


def _registry_for(args) -> UnitRegistry:
    path = getattr(args, "registry", None) or os.environ.get("DIMCHECK_REGISTRY")
    if not path:
        return default_registry()
    with open(path, encoding="utf-8") as handle:
        return load_registry(handle.read())


def _context_for(args) -> PrecisionContext | None:
    precision = getattr(args, "precision", None)
    if precision is None:
        return None
    return PrecisionContext(significant_digits=precision)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        registry = _registry_for(args)
    except OSError as exc:
        print(f"dimcheck: cannot read registry: {exc}", file=sys.stderr)
        return 2
    except UnitError as exc:
        print(f"dimcheck: bad registry file: {exc}", file=sys.stderr)
        return 2
    try:
        ctx = _context_for(args)
    except ValueError as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 2

    if args.command == "check":
        return _cmd_check(args, registry, ctx)
    if args.command == "eval":
        return _cmd_eval(args, registry, ctx)
    if args.command == "convert":
        return _cmd_convert(args, registry, ctx)
    if args.command == "units":
        return _cmd_units(args, registry)
    if args.command == "currency":
        return _cmd_currency(args)
    if args.command == "selftest":
        return _cmd_selftest(args, registry)
    parser.print_usage(sys.stderr)
    return 2


def _cmd_check(args, registry, ctx) -> int:
    try:
        with open(args.file, encoding="utf-8") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 2
    try:
        program = quantlang.parse(source)
    except quantlang.LangError as exc:
        _diag(args.file, exc.line, exc.col, type(exc).__name__, str(exc))
        return 1
    analysis = quantlang.analyze(program, registry)
    failed = False
    for entry in analysis.report.entries:
        if not entry.ok:
            failed = True
            _diag(args.file, entry.line, entry.col, entry.error_kind, entry.message)
        if args.format == "machine":
            status = "OK" if entry.ok else "ERROR"
            detail = entry.describe()
            print(f"{status}\t{entry.kind}\t{entry.line}:{entry.col}\t{detail}")

    # Closed eval statements print their value; closed asserts must hold.
    for item, entry in zip(analysis.program.items, analysis.report.entries):
        if not isinstance(item, quantlang.Statement) or not entry.ok:
            continue
        if item.kind not in ("eval", "assert"):
            continue
        if quantlang.free_variables(item.expr, analysis.constants):
            continue
        try:
            value = quantlang.evaluate(
                item.expr, analysis.constants, analysis.registry, ctx
            )
        except (ValueError, ZeroDivisionError) as exc:
            failed = True
            _diag(args.file, entry.line, entry.col, type(exc).__name__, str(exc))
            continue
        if item.kind == "eval":
            print(f"{args.file}:{entry.line}: {_render_result(value)}")
        elif value is not True:
            failed = True
            _diag(
                args.file,
                entry.line,
                entry.col,
                "AssertFailed",
                quantlang.render_expression(item.expr),
            )
    if args.format == "plain":
        errors = len(analysis.report.errors())
        items = len(analysis.report.entries)
        print(
            f"{args.file}: {items} item{'s' if items != 1 else ''}, "
            f"{errors} error{'s' if errors != 1 else ''}"
        )
    return 1 if failed else 0


def _render_result(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _cmd_eval(args, registry, ctx) -> int:
    try:
        expr = quantlang.parse_expression(args.expression)
    except quantlang.LangError as exc:
        _diag("<expr>", exc.line, exc.col, type(exc).__name__, str(exc))
        return 2
    try:
        value = quantlang.evaluate(expr, {}, registry, ctx)
        if args.in_unit is not None:
            if isinstance(value, bool):
                print("dimcheck: --in does not apply to comparisons", file=sys.stderr)
                return 2
            value = value.convert(registry.resolve(args.in_unit), ctx)
    except DimensionMismatchError as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 1
    except quantlang.UnknownNameError as exc:
        _diag("<expr>", exc.line, exc.col, type(exc).__name__, str(exc))
        return 2
    except (UnitError, ZeroDivisionError) as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 2
    print(_render_result(value))
    return 0


def _cmd_convert(args, registry, ctx) -> int:
    try:
        value = DecValue.parse(args.number)
        source = registry.resolve(args.source)
        target = registry.resolve(args.target)
        result = registry.make(value, source).convert(target, ctx)
    except (DecimalParseError, UnitError, DimensionMismatchError) as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 2
    print(result)
    return 0


def _cmd_units(args, registry) -> int:
    rows = []
    alias_map: dict[str, list[str]] = {}
    for alias, target in sorted(registry._aliases.items()):
        alias_map.setdefault(target, []).append(alias)
    for unit in registry.units():
        offset = "" if unit.offset == 0 else str(unit.offset)
        rows.append(
            (
                unit.name,
                unit.dimension.render(),
                str(unit.scale),
                offset,
                "canonical" if unit.canonical else "",
                ",".join(alias_map.get(unit.name, [])),
            )
        )
    if args.format == "machine":
        for row in rows:
            print("\t".join(row))
        return 0
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    header = ("unit", "dimension", "scale", "offset")
    widths = [max(w, len(h)) for w, h in zip(widths, header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)) + "  notes")
    for row in rows:
        notes = " ".join(part for part in (row[4], row[5] and f"aliases: {row[5]}") if part)
        print("  ".join(row[i].ljust(widths[i]) for i in range(4)) + f"  {notes}".rstrip())
    return 0


def _cmd_currency(args) -> int:
    if args.scenario == "random":
        engine, violations = currency.run_random_trace(args.seed)
        if args.trace:
            print(engine.digest())
        for v in violations:
            print(f"dimcheck: invariant violated: {v}", file=sys.stderr)
        print(f"random trace seed={args.seed}: 100 events, {len(violations)} violations")
        return 0 if not violations else 1
    try:
        with open(args.scenario, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"dimcheck: {exc}", file=sys.stderr)
        return 2
    try:
        result = currency.run_scenario(text, trace=args.trace)
    except currency.ScenarioError as exc:
        _diag(args.scenario, exc.line, 1, "ScenarioError", str(exc))
        return 2
    for line in result.trace:
        print(line)
    for failure in result.guard_failures:
        print(f"{args.scenario}: guard failed: {failure}", file=sys.stderr)
    for violation in result.violations:
        print(f"{args.scenario}: invariant violated: {violation}", file=sys.stderr)
    print(
        f"{args.scenario}: {result.events} events, {len(result.guard_failures)} guard failures, "
        f"{len(result.violations)} invariant violations"
    )
    return 0 if result.ok else 1


def _cmd_selftest(args, registry) -> int:
    if args.iterations < 1:
        print("dimcheck: --iterations must be at least 1", file=sys.stderr)
        return 2
    report = run_selftest(args.iterations, args.seed, registry)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
