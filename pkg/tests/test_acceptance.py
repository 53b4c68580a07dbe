"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict that is printed in the pytest terminal
summary (and directly when the module is run as a script).
"""

from __future__ import annotations

import itertools
import time
from functools import lru_cache

import pytest

from stablemaps.calculus import check_theorem, path_report, verify_plan
from stablemaps.explorer import enumerate_reachable, random_walk
from stablemaps.fixtures import SWALLOWTAIL_PATHS, swallowtail_balance
from stablemaps.planner import bfs_plan, plan_fold_free_cusps, plan_prescribed
from stablemaps.realizability import construct_concentric, construct_nested_pairs, fold_feasible
from stablemaps.state import InvariantTuple as T
from stablemaps.state import canonical_projection, invariants
from stablemaps.transitions import Direction, Site, Step, TransitionKind, aggregate, apply, increment_of, replay

K = TransitionKind
POS, NEG = Direction.POSITIVE, Direction.NEGATIVE
BASE = T(1, 0, 0, 0)
WALKS = 10_000
MAX_WALK = 30

VERDICTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(VERDICTS[n])


@lru_cache(maxsize=1)
def walks():
    start = time.perf_counter()
    traces = [random_walk(seed, seed % (MAX_WALK + 1)) for seed in range(WALKS)]
    return traces, time.perf_counter() - start


def test_criterion_1_increment_table():
    start = time.perf_counter()
    rows = {
        K.L: (1, 1, 0, 0),
        K.BMinusG: (0, -1, -1, 0),
        K.BZeroG: (0, 0, -1, 0),
        K.BPlusG: (0, 1, -1, 0),
        K.BV: (1, 1, 0, 0),
        K.PG: (0, -1, -1, 0),
        K.PV: (1, -1, 0, 0),
        K.A3E: (0, 0, 0, 2),
        K.A3H2C: (0, -2, 0, 2),
        K.A3HC: (0, -1, 0, 2),
        K.A3H0: (0, 0, 0, 2),
    }
    checks = []
    for kind, row in rows.items():
        checks.append(tuple(increment_of(kind, POS)) == row)
        checks.append(tuple(increment_of(kind, NEG)) == tuple(-x for x in row))
    elapsed = time.perf_counter() - start
    ok = len(checks) == 22 and all(checks) and elapsed < 1.0
    record(1, ok, f"{sum(checks)}/22 assertions in {elapsed:.3f}s")
    assert ok


def test_criterion_2_dual_bookkeeping():
    traces, elapsed = walks()
    bad = [t.seed for t in traces if t.tuple_history[-1] - BASE != aggregate(t.counts)]
    ok = not bad and len(traces) == WALKS and elapsed < 30.0
    record(2, ok, f"{WALKS - len(bad)}/{WALKS} walks of length <= {MAX_WALK} in {elapsed:.1f}s")
    assert ok, bad[:10]


def test_criterion_3_global_identity():
    traces, _ = walks()
    bad_walks = [
        t.seed for t in traces if not check_theorem(path_report(t.tuple_history[0], t.tuple_history[-1], t.counts))
    ]
    prescribed = [
        g
        for m in range(1, 6)
        for g in itertools.product(range(4), repeat=m)
        if sum(g) <= 5
    ]
    bad_prescribed = []
    for genera in prescribed:
        plan = plan_prescribed(genera)
        report, final, _ = verify_plan(list(plan.steps))
        m, q = len(genera), sum(genera)
        if not (check_theorem(report) and invariants(final) == (m, q + m - 1, q, 0)):
            bad_prescribed.append(genera)
    bad_fold_free = []
    for n, q in itertools.product(range(4), repeat=2):
        plan = plan_fold_free_cusps(n, q)
        report, final, _ = verify_plan(list(plan.steps))
        if not (check_theorem(report) and invariants(final) == (2 * n + 1, 0, q, 2 * n + 2 * q)):
            bad_fold_free.append((n, q))
    ok = not (bad_walks or bad_prescribed or bad_fold_free)
    record(
        3,
        ok,
        f"walks {WALKS - len(bad_walks)}/{WALKS}, prescribed {len(prescribed) - len(bad_prescribed)}/{len(prescribed)}, "
        f"fold-free {16 - len(bad_fold_free)}/16",
    )
    assert ok, (bad_walks[:10], bad_prescribed, bad_fold_free)


def test_criterion_4_parity_oracle():
    start = time.perf_counter()
    tuples = enumerate_reachable(6)
    elapsed = time.perf_counter() - start
    even_free = [t for t in tuples if t.is_ == 0 and (t.ie + t.ig + t.ic) % 2 == 0]
    odd_is = [t for t in tuples if t.is_ % 2]
    no_surface = [t for t in tuples if t.ie == 0]
    ok = not (even_free or odd_is or no_surface) and elapsed < 120.0
    record(
        4,
        ok,
        f"{len(tuples)} tuples at depth 6 in {elapsed:.2f}s; parity breaks={len(even_free)} odd is={len(odd_is)} ie=0={len(no_surface)}",
    )
    assert ok, (even_free[:5], odd_is[:5], no_surface[:5])


def test_criterion_5_swallowtail_paths():
    got = tuple(swallowtail_balance(p.moves) for p in SWALLOWTAIL_PATHS)
    want = (0, 0, 2, 0, 2, 0, 0, -2, -2)
    ok = got == want
    record(5, ok, f"a3hc-b0g={got}")
    assert ok


def test_criterion_6_worked_sequences():
    handle, _ = replay(canonical_projection(), [Step(K.L, POS), Step(K.PG, NEG)])
    w1 = apply(canonical_projection(), K.A3E, POS, Site(surface="S0"))
    w2, _ = replay(w1, [Step(K.PG, NEG)])
    w3, _ = replay(w2, [Step(K.PG, NEG)])
    t1, t3 = invariants(w1), invariants(w3)
    ok = invariants(handle) == (2, 2, 1, 0) and t3.ic == t1.ic + 2 and t3.is_ == t1.is_
    record(6, ok, f"lip+handle={invariants(handle)} w1={t1} w3={t3}")
    assert ok


def test_criterion_7_fold_feasibility():
    concentric = all(fold_feasible(construct_concentric(n).genera) for n in (1, 3, 5))
    k_lists = [list(k) for r in (1, 2) for k in itertools.product(range(1, 4), repeat=r)]
    pairs = all(fold_feasible(construct_nested_pairs(k).genera) for k in k_lists)
    two_spheres = fold_feasible([0, 0])
    start = time.perf_counter()
    found = bfs_plan(T(2, 0, 0, 0), 8)
    elapsed = time.perf_counter() - start
    ok = concentric and pairs and not two_spheres and found is None
    record(
        7,
        ok,
        f"concentric={concentric} nested pairs ({len(k_lists)} lists)={pairs} [0,0]={two_spheres} "
        f"bfs (2,0,0,0) depth 8={'none' if found is None else 'found'} in {elapsed:.2f}s",
    )
    assert ok


def test_criterion_8_unreachability():
    odd = bfs_plan(T(1, 0, 0, 1), 8)
    base = bfs_plan(BASE, 8)
    ok = odd is None and base is not None and base.steps == ()
    record(8, ok, f"(1,0,0,1)={'none' if odd is None else 'found'} "
        f"(1,0,0,0)={'none' if base is None else f'plan of length {len(base)}'}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
