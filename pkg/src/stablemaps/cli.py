"""Command-line entry point.

Every command prints line-oriented ``key=value`` output.  Exit status is 0 on
success, 1 when a law check fails, a target is unreachable or a branch set is
infeasible, and 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .calculus import format_report, law_checks, path_report, verify_plan
from .errors import StableMapError
from .explorer import enumerate_reachable, format_trace, random_walk
from .fixtures import format_results, run_fixtures
from .planner import DEFAULT_MAX_STEPS, Plan, bfs_plan, plan_fold_free_cusps, plan_prescribed
from .realizability import NestingForest, construct_concentric, construct_nested_pairs, fold_feasible
from .state import InvariantTuple, format_state, invariants, parse_state
from .transitions import format_plan, parse_plan

__all__ = ["main", "build_parser"]


class InputError(Exception):
    """Unreadable file or malformed flag value."""


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")] if text.strip() else []
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _target(text: str) -> InvariantTuple:
    values = _int_list(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"target needs four values ie,ic,ig,is, got {text!r}")
    return InvariantTuple(*values)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _flag(ok: bool) -> str:
    return "true" if ok else "false"


def cmd_invariants(args) -> int:
    t = invariants(parse_state(_read(args.state)))
    print(f"tuple={t}")
    print(f"iv={t.iv}")
    return 0


def cmd_apply(args) -> int:
    start = parse_state(_read(args.state))
    _, final, _ = verify_plan(parse_plan(_read(args.plan)), start)
    text = format_state(final)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"tuple={invariants(final)}")
    return 0


def cmd_verify(args) -> int:
    start = parse_state(_read(args.state))
    report, _, _ = verify_plan(parse_plan(_read(args.plan)), start)
    sys.stdout.write(format_report(report))
    return 0 if all(law_checks(report).values()) else 1


def _emit_plan(plan: Plan) -> int:
    sys.stdout.write(format_plan(plan.steps, comments=[f"target = {plan.expected_final}", f"length = {len(plan)}"]))
    return 0


def cmd_plan(args) -> int:
    plan = bfs_plan(args.target, args.max_steps)
    if plan is None:
        print("unreachable")
        return 1
    return _emit_plan(plan)


def cmd_plan_prescribed(args) -> int:
    return _emit_plan(plan_prescribed(args.genera))


def cmd_plan_fold_free(args) -> int:
    return _emit_plan(plan_fold_free_cusps(args.n, args.q))


def cmd_enumerate(args) -> int:
    tuples = sorted(enumerate_reachable(args.max_steps))
    if args.swallowtail_free:
        tuples = [t for t in tuples if t.is_ == 0]
    for t in tuples:
        print(t)
    print(f"count={len(tuples)}")
    if args.plot:
        from .plotting import plot_tuples

        print(f"plot={plot_tuples(tuples, args.plot)}")
    return 0


def cmd_walk(args) -> int:
    trace = random_walk(args.seed, args.steps)
    sys.stdout.write(format_trace(trace))
    status = 0
    if args.check:
        report = path_report(trace.tuple_history[0], trace.tuple_history[-1], trace.counts)
        checks = law_checks(report)
        print(f"lhs={report.lhs}")
        print(f"rhs={report.rhs}")
        for name, ok in checks.items():
            print(f"{name}={_flag(ok)}")
        status = 0 if all(checks.values()) else 1
    if args.plot:
        from .plotting import plot_walk

        print(f"plot={plot_walk(trace, args.plot)}")
    return status


def cmd_check_fold(args) -> int:
    forest: NestingForest | None = None
    if args.concentric is not None:
        forest = construct_concentric(args.concentric)
    elif args.nested_pairs is not None:
        forest = construct_nested_pairs(args.nested_pairs)
    genera = forest.genera if forest is not None else args.genera
    feasible = fold_feasible(genera)
    print(f"genera={','.join(map(str, genera))}")
    print(f"surfaces={len(genera)}")
    print(f"total_genus={sum(genera)}")
    print(f"feasible={_flag(feasible)}")
    if forest is not None:
        sys.stdout.write(forest.format())
    return 0 if feasible else 1


def cmd_fixtures(args) -> int:
    results = run_fixtures()
    sys.stdout.write(format_results(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablemaps", description="Invariant calculus for stable maps of the 3-sphere.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("invariants", help="print the invariant tuple of a state file")
    p.add_argument("state")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("apply", help="apply a plan to a state")
    p.add_argument("state")
    p.add_argument("plan")
    p.add_argument("--out", help="write the final state here instead of stdout")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", help="replay a plan and check every applicable law")
    p.add_argument("state")
    p.add_argument("plan")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plan", help="shortest plan from the canonical projection to a target tuple")
    p.add_argument("--target", type=_target, required=True, help="ie,ic,ig,is")
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("plan-prescribed", help="plan for surfaces of prescribed genera")
    p.add_argument("--genera", type=_int_list, required=True, help="g1,g2,...")
    p.set_defaults(func=cmd_plan_prescribed)

    p = sub.add_parser("plan-fold-free", help="plan with no cuspidal curves")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_plan_fold_free)

    p = sub.add_parser("enumerate", help="list reachable tuples")
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--swallowtail-free", action="store_true", help="keep only tuples with is=0")
    p.add_argument("--plot", metavar="PATH", help="also render a scatter of the tuples")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("walk", help="seeded random walk from the canonical projection")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--check", action="store_true", help="run the law checks on the walk")
    p.add_argument("--plot", metavar="PATH", help="also render the invariants along the walk")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("check-fold", help="parity test for a fold-map branch set")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--genera", type=_int_list)
    group.add_argument("--concentric", type=int, metavar="N")
    group.add_argument("--nested-pairs", type=_int_list, metavar="K1,K2,...")
    p.set_defaults(func=cmd_check_fold)

    p = sub.add_parser("fixtures", help="replay the built-in worked sequences")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (StableMapError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
