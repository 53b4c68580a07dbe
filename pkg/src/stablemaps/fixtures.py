"""Built-in worked sequences, replayed by the ``fixtures`` command and the test suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .calculus import lemma2_parity, verify_plan
from .planner import plan_fold_free_cusps, plan_prescribed
from .state import InvariantTuple, MapState, canonical_projection, invariants
from .transitions import Direction, Step, TransitionKind, counts_of, replay

__all__ = [
    "FixtureResult",
    "SwallowtailPath",
    "SWALLOWTAIL_PATHS",
    "swallowtail_balance",
    "run_fixtures",
    "format_results",
]

K = TransitionKind
POS, NEG = Direction.POSITIVE, Direction.NEGATIVE


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class SwallowtailPath:
    """A path that creates and then removes one swallowtail pair, with its ``a3hc - b0g`` value."""

    label: str
    moves: tuple[tuple[TransitionKind, Direction], ...]
    expected: int


def _path(label: str, expected: int, *moves: tuple[TransitionKind, Direction]) -> SwallowtailPath:
    return SwallowtailPath(label, tuple(moves), expected)


# Ways a swallowtail pair can be born and die through A3hc, B0g, A3h0 and A3h2c.
SWALLOWTAIL_PATHS: tuple[SwallowtailPath, ...] = (
    _path("i", 0, (K.A3HC, POS), (K.A3HC, NEG)),
    _path("ii", 0, (K.A3HC, POS), (K.BZeroG, POS), (K.A3H0, NEG)),
    _path("iii", 2, (K.A3HC, POS), (K.BZeroG, NEG), (K.A3H0, NEG)),
    _path("iv", 0, (K.BZeroG, NEG), (K.BZeroG, POS), (K.A3H2C, NEG)),
    _path("v", 2, (K.BZeroG, NEG), (K.BZeroG, NEG), (K.A3H2C, NEG)),
    _path("vi", 0, (K.BZeroG, NEG), (K.A3HC, NEG)),
    _path("vii", 0, (K.BZeroG, POS), (K.BZeroG, NEG), (K.A3H2C, NEG)),
    _path("viii", -2, (K.BZeroG, POS), (K.BZeroG, POS), (K.A3H0, NEG)),
    _path("ix", -2, (K.BZeroG, POS), (K.A3HC, NEG)),
)


def swallowtail_balance(moves) -> int:
    counts = counts_of(moves)
    return counts.a3hc - counts.b_zero_g


def _check(name: str, ok: bool, detail: str) -> FixtureResult:
    return FixtureResult(name, bool(ok), detail)


def _swallowtail_results() -> list[FixtureResult]:
    out = []
    for path in SWALLOWTAIL_PATHS:
        got = swallowtail_balance(path.moves)
        out.append(_check(f"swallowtail-path-{path.label}", got == path.expected, f"a3hc-b0g={got} expected={path.expected}"))
    return out


def _run(start: MapState, *moves: tuple[TransitionKind, Direction]) -> MapState:
    final, _ = replay(start, [Step(kind, direction) for kind, direction in moves])
    return final


def _handle_sequence() -> list[FixtureResult]:
    t = invariants(_run(canonical_projection(), (K.L, POS), (K.PG, NEG)))
    return [_check("lip-then-handle", t == InvariantTuple(2, 2, 1, 0), f"final={t}")]


def _swallowtail_sequence() -> list[FixtureResult]:
    w1 = _run(canonical_projection(), (K.A3E, POS))
    w2 = _run(w1, (K.PG, NEG))
    w3 = _run(w2, (K.PG, NEG))
    t1, t2, t3 = invariants(w1), invariants(w2), invariants(w3)
    u1 = invariants(_run(w1, (K.A3H0, POS)))
    u2 = invariants(_run(w2, (K.A3HC, POS)))
    u3 = invariants(_run(w3, (K.A3H2C, POS)))
    return [
        _check("handles-after-swallowtails", t3.ic == t1.ic + 2 and t3.is_ == t1.is_, f"w1={t1} w3={t3}"),
        _check("a3h0-on-w1", u1.is_ == t1.is_ + 2 and u1.ic == t1.ic, f"w1={t1} after={u1}"),
        _check("a3hc-on-w2", t2.ic == u2.ic + 1 and u2.is_ == t2.is_ + 2, f"w2={t2} after={u2}"),
        _check("a3h2c-on-w3", t3.ic == u3.ic + 2 and u3.is_ == t3.is_ + 2, f"w3={t3} after={u3}"),
    ]


def _vertex_sequence() -> list[FixtureResult]:
    f1 = _run(canonical_projection(), (K.L, POS), (K.PV, POS))
    f2 = _run(f1, (K.PV, NEG))
    f3 = _run(f2, (K.PG, NEG))
    got = (invariants(f1), invariants(f2), invariants(f3))
    want = (InvariantTuple(3, 0, 0, 0), InvariantTuple(2, 1, 0, 0), InvariantTuple(2, 2, 1, 0))
    return [_check("three-spheres-to-torus", got == want, " ".join(f"f{i}={t}" for i, t in enumerate(got, 1)))]


def _construction(name: str, build: Callable[[], object]) -> FixtureResult:
    plan = build()
    report, final, _ = verify_plan(list(plan.steps))
    ok = (
        report.holds
        and report.bookkeeping
        and invariants(final) == plan.expected_final
        and lemma2_parity(report.counts, report.final)
    )
    return _check(name, ok, f"final={report.final} lhs={report.lhs} rhs={report.rhs}")


def _construction_results() -> list[FixtureResult]:
    out = []
    for genera in ([0], [1], [0, 0], [1, 2], [0, 1, 0]):
        out.append(_construction(f"prescribed-{','.join(map(str, genera))}", lambda g=genera: plan_prescribed(g)))
    for n, q in ((0, 0), (0, 1), (1, 0), (1, 1), (2, 1)):
        out.append(_construction(f"fold-free-n{n}-q{q}", lambda n=n, q=q: plan_fold_free_cusps(n, q)))
    return out


def run_fixtures() -> list[FixtureResult]:
    return (
        _swallowtail_results()
        + _handle_sequence()
        + _swallowtail_sequence()
        + _vertex_sequence()
        + _construction_results()
    )


def format_results(results: list[FixtureResult]) -> str:
    lines = [f"{r.name}={'pass' if r.passed else 'fail'} {r.detail}" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"summary={passed}/{len(results)}")
    return "\n".join(lines) + "\n"
