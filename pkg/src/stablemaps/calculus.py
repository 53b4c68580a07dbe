"""Global laws relating the invariants to the transitions crossed along a path."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .state import InvariantTuple, MapState, canonical_projection, invariants
from .transitions import Step, TransitionCounts, aggregate, counts_of, replay

__all__ = [
    "BASE_TUPLE",
    "PathReport",
    "theorem_rhs",
    "check_theorem",
    "lemma2_parity",
    "swallowtail_free_parity",
    "fold_parity",
    "path_report",
    "verify_plan",
    "format_report",
    "law_checks",
]

BASE_TUPLE = InvariantTuple(1, 0, 0, 0)


def theorem_rhs(counts: TransitionCounts) -> int:
    c = counts
    return 1 + 2 * (c.ell + c.b_v - c.b_minus_g - c.p_g + c.a3e + c.a3h0) + c.a3hc - c.b_zero_g


@dataclass(frozen=True)
class PathReport:
    """Outcome of checking one path.

    ``lhs``/``rhs`` are the two sides of the global identity
    ``I_E + I_G + I_C + I_S = theorem_rhs(counts)``, which is only claimed for
    paths starting at the canonical projection (``anchored``).  ``bookkeeping``
    is the anchor-free check ``final - initial == aggregate(counts)``.
    """

    initial: InvariantTuple
    final: InvariantTuple
    counts: TransitionCounts
    lhs: int
    rhs: int
    holds: bool
    bookkeeping: bool

    @property
    def anchored(self) -> bool:
        return self.initial == BASE_TUPLE


def path_report(initial: InvariantTuple, final: InvariantTuple, counts: TransitionCounts) -> PathReport:
    lhs = final.total
    rhs = theorem_rhs(counts)
    return PathReport(
        initial=initial,
        final=final,
        counts=counts,
        lhs=lhs,
        rhs=rhs,
        holds=lhs == rhs,
        bookkeeping=(final - initial) == aggregate(counts),
    )


def check_theorem(report: PathReport) -> bool:
    if not report.anchored:
        raise DomainError(f"the identity is anchored at {BASE_TUPLE}, path starts at {report.initial}")
    return report.final.total == theorem_rhs(report.counts)


def lemma2_parity(counts: TransitionCounts, final: InvariantTuple) -> bool:
    """``a3hc - b0g`` is even whenever the path ends without swallowtails.

    Vacuously true when ``final`` still has swallowtails.
    """
    if final.is_ != 0:
        return True
    return (counts.a3hc - counts.b_zero_g) % 2 == 0


def swallowtail_free_parity(t: InvariantTuple) -> bool:
    if t.is_ != 0:
        raise DomainError(f"{t} has swallowtails; the parity law needs I_S = 0")
    return (t.ie + t.ig + t.ic) % 2 == 1


def fold_parity(t: InvariantTuple) -> bool:
    if t.ic != 0 or t.is_ != 0:
        raise DomainError(f"{t} is not a fold-map tuple (needs I_C = I_S = 0)")
    return (t.ie + t.ig) % 2 == 1


def verify_plan(steps: list[Step], start: MapState | None = None) -> tuple[PathReport, MapState, list[Step]]:
    """Replay ``steps`` from ``start`` (default: canonical projection) and report."""
    start = start if start is not None else canonical_projection()
    final_state, resolved = replay(start, steps)
    report = path_report(invariants(start), invariants(final_state), counts_of(resolved))
    return report, final_state, resolved


def _flag(ok: bool) -> str:
    return "true" if ok else "false"


def law_checks(report: PathReport) -> dict[str, bool]:
    """Every law that applies to ``report``; the parity laws need a path from the canonical projection."""
    checks = {}
    if report.anchored:
        checks["holds"] = report.holds
    checks["bookkeeping"] = report.bookkeeping
    if report.anchored:
        checks["lemma2_parity"] = lemma2_parity(report.counts, report.final)
        if report.final.is_ == 0:
            checks["swallowtail_free_parity"] = swallowtail_free_parity(report.final)
            if report.final.ic == 0:
                checks["fold_parity"] = fold_parity(report.final)
    return checks


def format_report(report: PathReport) -> str:
    lines = [
        f"initial={report.initial}",
        f"final={report.final}",
        f"anchored={str(report.anchored).lower()}",
        f"lhs={report.lhs}",
        f"rhs={report.rhs}",
    ]
    lines.extend(f"{name}={_flag(ok)}" for name, ok in law_checks(report).items())
    lines.extend(f"{name}={value}" for name, value in report.counts.as_dict().items())
    return "\n".join(lines) + "\n"
