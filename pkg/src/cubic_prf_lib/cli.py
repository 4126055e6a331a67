"""
Command-line interface: ``cubic-prf <command> [options]``.

Commands:
    test FUNCTION       permutation verdict with canonical data
    classify FUNCTION   canonical class of a permutation
    canonical FUNCTION  canonical class with Mobius witnesses
    count               census N_q against the closed formula
    classes             equivalence classes by orbit walk
    complete            complete permutations of the monic-pair population
    jump FUNCTION       fractional-jump permutation table
    extend FUNCTION     does FUNCTION permute P^1(F_{q^n})?
    selfcheck           acceptance suite

Verdicts are output, not exit codes: exit status is 0 on success, 1 on a
domain error, 2 on a usage error and 3 when brute force and criterion disagree.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Any, Optional

from cubic_prf_lib import __version__
from cubic_prf_lib.census import (
    METHODS,
    SHAPES,
    complete_census,
    count_permutations,
    equivalence_classes,
    expected_class_count,
    formula_shape_counts,
    predicted_complete,
)
from cubic_prf_lib.config_manager import Guards, get_guards
from cubic_prf_lib.cubicperm import MODES, canonicalize, elem_json, extension_permutation, is_permutation
from cubic_prf_lib.error_handler import ErrorContext, GuardExceededError, handle_errors
from cubic_prf_lib.formatters import (
    export_csv,
    format_count,
    format_json,
    format_json_lines,
    format_table,
    get_csv_string,
    print_header,
    print_info,
    print_success,
    print_warning,
)
from cubic_prf_lib.gf import FieldCtx, ext_create, parse_field_spec
from cubic_prf_lib.projfunc import RatFunc, format_ratfunc, fractional_jump, lift_ratfunc, parse_ratfunc
from cubic_prf_lib.selfcheck import CHECKS, FAIL, PASS, run_selfcheck

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """One stderr handler on the package logger; program output stays on stdout."""
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    root = logging.getLogger("cubic_prf_lib")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("-q", "--quiet", action="store_true", help="errors only on stderr")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-q", type=int, default=None, help="override every census size guard")

    with_field = argparse.ArgumentParser(add_help=False)
    with_field.add_argument("--field", required=True, help='field spec: "7", "9", "3^2" or "2^3:[1,1,0,1]"')

    with_function = argparse.ArgumentParser(add_help=False)
    with_function.add_argument("function", help='rational function, e.g. "(x^3+x)/(2*x^2+1)"')

    parser = argparse.ArgumentParser(
        prog="cubic-prf",
        description="Degree-3 permutation rational functions over finite fields",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    test = subparsers.add_parser("test", parents=[common, with_field, with_function],
                                 help="decide whether FUNCTION permutes P^1(F_q)")
    test.add_argument("--mode", choices=MODES, default="auto")

    subparsers.add_parser("classify", parents=[common, with_field, with_function],
                          help="canonical class of a permutation")
    subparsers.add_parser("canonical", parents=[common, with_field, with_function],
                          help="canonical class with Mobius witnesses")

    count = subparsers.add_parser("count", parents=[common, with_field], help="census N_q against the formula")
    count.add_argument("--mode", choices=METHODS, default="brute")
    count.add_argument("--threads", type=int, default=None)
    count.add_argument("--csv", metavar="PATH", default=None, help='write the shape table as CSV ("-" for stdout)')
    count.add_argument("--checkpoint", action="store_true", help="save partial results and resume")

    subparsers.add_parser("classes", parents=[common, with_field], help="equivalence classes by orbit walk")
    subparsers.add_parser("complete", parents=[common, with_field], help="complete permutations")

    jump = subparsers.add_parser("jump", parents=[common, with_field, with_function],
                                 help="fractional-jump permutation table")
    jump.add_argument("--n", type=int, default=1, help="lift to F_{q^n} first")

    extend = subparsers.add_parser("extend", parents=[common, with_field, with_function],
                                   help="does FUNCTION permute P^1(F_{q^n})?")
    extend.add_argument("--n", type=int, required=True)
    extend.add_argument("--mode", choices=["predict", "verify"], default="verify")

    selfcheck = subparsers.add_parser("selfcheck", parents=[common], help="run the acceptance suite")
    selfcheck.add_argument("--only", nargs="+", choices=list(CHECKS), default=None)
    return parser


# =============================================================================
# Commands
# =============================================================================


def _function(args: argparse.Namespace, ctx: FieldCtx) -> RatFunc:
    return parse_ratfunc(args.function, ctx)


def _emit(data: Any) -> None:
    print(format_json(data))


def cmd_test(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    report = is_permutation(_function(args, ctx), args.mode, guards)
    if args.json:
        _emit(report.to_dict())
        return 0
    print(f"{report.function} over F_{ctx.q} ({ctx.spec}): {report.verdict}")
    print(f"  method:    {report.method}")
    print(f"  separable: {report.separable}")
    if report.canon:
        print(f"  class:     {report.canon}")
    return 0


def cmd_canonical(args: argparse.Namespace, ctx: FieldCtx, guards: Guards, witnesses: bool = True) -> int:
    report = canonicalize(_function(args, ctx), guards)
    if args.json:
        _emit(report.to_dict())
        return 0
    canon = report.canon
    print(f"{report.function} over F_{ctx.q} ({ctx.spec})")
    print(f"  class:          {canon}")
    print(f"  representative: {canon.ratfunc(ctx)}")
    if witnesses:
        m1, m2 = report.witnesses
        print(f"  m1:             {m1}")
        print(f"  m2:             {m2}")
    return 0


def cmd_classify(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    return cmd_canonical(args, ctx, guards, witnesses=False)


def _shape_expected(q: int) -> dict[tuple[int, int], int]:
    counts = formula_shape_counts(q)
    by_degrees = {(3, 3): counts.r33, (3, 2): counts.r32, (3, 1): counts.r31, (3, 0): counts.r30}
    return {shape: by_degrees[tuple(sorted(shape, reverse=True))] for shape in SHAPES}


def cmd_count(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    with ErrorContext("count", field=ctx.spec):
        result = count_permutations(ctx, args.mode, guards, threads=args.threads, checkpoint=args.checkpoint)
    expected = _shape_expected(ctx.q)
    rows = []
    for row in result.rows:
        data = row.to_dict()
        data["expected"] = expected[row.shape]
        rows.append(data)
    table_rows = [dict(r, shape="({}, {})".format(*r["shape"])) for r in rows]

    if args.csv:
        columns = ["q", "shape", "pairs", "permutations", "expected", "method"]
        if args.csv == "-":
            print(get_csv_string(table_rows, columns), end="")
        else:
            print_info(f"wrote {export_csv(table_rows, args.csv, columns)}")
    if args.json:
        print(format_json_lines(rows))
        return 0
    if args.csv == "-":
        return 0

    print_header(f"Census over F_{ctx.q} ({ctx.spec}, {result.method})")
    print(format_table(table_rows, columns=["shape", "pairs", "permutations", "expected"]))
    print()
    message = f"N_{ctx.q} = {result.N_q}, formula {result.formula}"
    if result.matches_formula:
        print_success(message)
    else:
        print_warning(message + " (mismatch)")
    return 0


def cmd_classes(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    table = equivalence_classes(ctx, guards)
    if args.json:
        _emit(table.to_dict())
        return 0
    print_header(f"Equivalence classes over F_{ctx.q} ({ctx.spec})")
    print(format_table([o.to_dict() for o in table.orbits], columns=["size", "representative"]))
    print()
    expected = expected_class_count(ctx.q)
    message = f"{format_count(table.class_count, 'class', 'classes')} covering {table.population} functions"
    if table.class_count == expected:
        print_success(message)
    else:
        print_warning(f"{message}, expected {expected}")
    return 0


def cmd_complete(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    found = complete_census(ctx, guards)
    if args.json:
        _emit({
            "field": ctx.spec,
            "complete": [format_ratfunc(phi) for phi in found],
            "predicted": len(predicted_complete(ctx)),
        })
        return 0
    print_header(f"Complete permutations over F_{ctx.q} ({ctx.spec})")
    for phi in found:
        print(f"  {phi}")
    print_success(format_count(len(found), "complete permutation"))
    return 0


def _lift(phi: RatFunc, n: int, guards: Guards) -> RatFunc:
    if n == 1:
        return phi
    q = phi.ctx.q
    if q**n > guards.max_extension_points:
        raise GuardExceededError(
            f"q^n = {q**n} exceeds the extension guard {guards.max_extension_points}", operation="jump",
        )
    return lift_ratfunc(phi, ext_create(phi.ctx, n))


def cmd_jump(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    phi = _lift(_function(args, ctx), args.n, guards)
    table = fractional_jump(phi)
    big = phi.ctx
    if args.json:
        _emit({
            "field": ctx.spec,
            "n": args.n,
            "function": str(phi),
            "table": [[elem_json(big.from_code(i)), elem_json(y)] for i, y in enumerate(table)],
        })
        return 0
    rows = [{"x": big.format_code(i), "jump": str(y)} for i, y in enumerate(table)]
    print(format_table(rows, columns=["x", "jump"]))
    return 0


def cmd_extend(args: argparse.Namespace, ctx: FieldCtx, guards: Guards) -> int:
    phi = _function(args, ctx)
    permutes = extension_permutation(phi, args.n, args.mode, guards)
    if args.json:
        _emit({"field": ctx.spec, "function": str(phi), "n": args.n, "mode": args.mode, "permutes": permutes})
        return 0
    verb = "permutes" if permutes else "does not permute"
    print(f"{phi} {verb} P^1(F_{ctx.q}^{args.n}) [{args.mode}]")
    return 0


def cmd_selfcheck(args: argparse.Namespace, guards: Guards) -> int:
    report = run_selfcheck(guards, args.max_q, args.only)
    if args.json:
        _emit(report.to_dict())
        return 0 if report.ok else 1
    for result in report.results:
        line = f"{result.name:<10} {result.status:<8} {result.seconds:7.1f}s  {result.detail}"
        if result.status == PASS:
            print_success(line)
        elif result.status == FAIL:
            print_warning(line)
        else:
            print_info(line)
    if not report.ok:
        print(f"failed: {', '.join(report.failed)}", file=sys.stderr)
    return 0 if report.ok else 1


COMMANDS = {
    "test": cmd_test,
    "classify": cmd_classify,
    "canonical": cmd_canonical,
    "count": cmd_count,
    "classes": cmd_classes,
    "complete": cmd_complete,
    "jump": cmd_jump,
    "extend": cmd_extend,
}


@handle_errors
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    guards = get_guards(threads=getattr(args, "threads", None)).with_max_q(args.max_q)
    logger.debug("command %s with guards %s", args.command, guards)

    if args.command == "selfcheck":
        return cmd_selfcheck(args, guards)
    ctx = parse_field_spec(args.field)
    return COMMANDS[args.command](args, ctx, guards)


if __name__ == "__main__":
    sys.exit(main())
