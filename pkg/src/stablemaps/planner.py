"""Transition plans that realise prescribed invariants or singular sets.

Two constructive recipes start from the canonical projection:

* :func:`plan_prescribed` realises ``m`` surfaces of prescribed genera with
  invariants ``(m, q + m - 1, q, 0)``;
* :func:`plan_fold_free_cusps` realises ``2n + 1`` surfaces with no cuspidal
  curves and invariants ``(2n + 1, 0, q, 2n + 2q)``.

:func:`bfs_plan` searches the rewrite system directly for a shortest plan.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .state import InvariantTuple, MapState, canonical_key, canonical_projection, invariants
from .transitions import Direction, Site, Step, TransitionKind, replay, successors

__all__ = ["Plan", "plan_prescribed", "plan_fold_free_cusps", "bfs_plan", "DEFAULT_MAX_STEPS"]

DEFAULT_MAX_STEPS = 12

K = TransitionKind
POS, NEG = Direction.POSITIVE, Direction.NEGATIVE


@dataclass(frozen=True)
class Plan:
    steps: tuple[Step, ...]
    expected_final: InvariantTuple
    final_state: MapState

    def __len__(self) -> int:
        return len(self.steps)


def _realise(steps: Sequence[Step], expected: InvariantTuple) -> Plan:
    final, resolved = replay(canonical_projection(), steps)
    got = invariants(final)
    if got != expected:
        raise AssertionError(f"plan reached {got}, expected {expected}")
    return Plan(tuple(resolved), expected, final)


def plan_prescribed(genera: Sequence[int]) -> Plan:
    """Plan for ``len(genera)`` surfaces, surface ``i`` of genus ``genera[i]``.

    The canonical sphere ``S0`` plays surface 0; each ``L+`` adds the next one,
    and ``Pg-`` adds a handle together with a cuspidal curve.
    """
    genera = list(genera)
    if not genera:
        raise DomainError("need at least one surface")
    if any(g < 0 for g in genera):
        raise DomainError(f"genera must be non-negative, got {genera}")
    m, q = len(genera), sum(genera)
    steps = [Step(K.L, POS)] * (m - 1)
    for i, g in enumerate(genera):
        steps += [Step(K.PG, NEG, Site(surface=f"S{i}"))] * g
    return _realise(steps, InvariantTuple(m, q + m - 1, q, 0))


def plan_fold_free_cusps(n: int, q: int) -> Plan:
    """Plan for ``2n + 1`` surfaces, total genus ``q``, no cuspidal curves, ``2n + 2q`` swallowtails.

    ``n`` lips become ``n`` extra surfaces via ``L+`` then ``Pv+``; ``n``
    swallowtail pairs come from ``A3e+``; each handle from ``Pg-`` brings a
    cuspidal curve that ``A3hc+`` trades for two more swallowtails.  With
    ``n = 0`` there is no swallowtail circuit for ``A3hc+`` to grow, so one
    ``A3e+`` is borrowed up front and paid back with ``A3h0-`` at the end.
    """
    if n < 0 or q < 0:
        raise DomainError(f"n and q must be non-negative, got n={n}, q={q}")
    on_base = Site(surface="S0")
    steps = [Step(K.L, POS)] * n
    steps += [Step(K.PV, POS, Site(surface=f"S{i}", g1=0, keep=())) for i in range(1, n + 1)]
    steps += [Step(K.A3E, POS, on_base)] * n
    steps += [Step(K.PG, NEG, on_base)] * q
    borrow = n == 0 and q > 0
    if borrow:
        steps.append(Step(K.A3E, POS, on_base))
    steps += [Step(K.A3HC, POS, on_base)] * q
    if borrow:
        steps.append(Step(K.A3H0, NEG, Site(surface="S0", circuit=0)))
    return _realise(steps, InvariantTuple(2 * n + 1, 0, q, 2 * n + 2 * q))


def _distance_bound(t: InvariantTuple, target: InvariantTuple) -> int:
    # One move changes I_E and I_G by at most 1, I_C and I_S by at most 2.
    return max(
        abs(t.ie - target.ie),
        math.ceil(abs(t.ic - target.ic) / 2),
        abs(t.ig - target.ig),
        math.ceil(abs(t.is_ - target.is_) / 2),
    )


def bfs_plan(target: InvariantTuple, max_steps: int = DEFAULT_MAX_STEPS) -> Plan | None:
    """Shortest plan from the canonical projection to a state with invariants ``target``.

    States are deduplicated on :func:`canonical_key`; children that cannot
    reach ``target`` in the remaining budget are not queued.  Returns None
    when no plan of length ``<= max_steps`` exists.
    """
    if max_steps < 0:
        raise DomainError("max_steps must be >= 0")
    target = InvariantTuple(*target)
    root = canonical_projection()
    if invariants(root) == target:
        return Plan((), target, root)
    seen = {canonical_key(root)}
    queue: deque[tuple[MapState, tuple[Step, ...]]] = deque([(root, ())])
    while queue:
        state, path = queue.popleft()
        budget = max_steps - len(path) - 1
        if budget < 0:
            continue
        for step, child in successors(state):
            key = canonical_key(child)
            if key in seen:
                continue
            seen.add(key)
            t = invariants(child)
            if t == target:
                return Plan(path + (step,), target, child)
            if _distance_bound(t, target) <= budget:
                queue.append((child, path + (step,)))
    return None
