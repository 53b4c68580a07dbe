"""Brute-force oracles: exhaustive reachability and seeded random walks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .state import InvariantTuple, MapState, canonical_key, canonical_projection, invariants, state_from_key
from .transitions import Step, TransitionCounts, apply, counts_of, site_groups, successors

__all__ = ["WalkTrace", "reachable_states", "enumerate_reachable", "random_walk", "format_trace"]


def reachable_states(max_steps: int, start: MapState | None = None) -> dict[tuple, int]:
    """Canonical keys of all states within ``max_steps`` moves, with their depth."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    root = canonical_key(start if start is not None else canonical_projection())
    depth = {root: 0}
    frontier = [root]
    for d in range(1, max_steps + 1):
        nxt = []
        for key in frontier:
            for _, child in successors(state_from_key(key)):
                ck = canonical_key(child)
                if ck not in depth:
                    depth[ck] = d
                    nxt.append(ck)
        frontier = nxt
    return depth


def enumerate_reachable(max_steps: int) -> set[InvariantTuple]:
    return {invariants(state_from_key(key)) for key in reachable_states(max_steps)}


@dataclass
class WalkTrace:
    seed: int
    steps: list[Step] = field(default_factory=list)
    tuple_history: list[InvariantTuple] = field(default_factory=list)
    counts: TransitionCounts = field(default_factory=TransitionCounts)
    final: MapState | None = None


def random_walk(seed: int, steps: int, start: MapState | None = None) -> WalkTrace:
    """Walk ``steps`` moves from the canonical projection, choosing uniformly among all legal moves.

    Choices come from numpy's PCG64 generator seeded with ``seed``, so a trace
    replays bit-identically from its seed.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    state = start if start is not None else canonical_projection()
    trace = WalkTrace(seed, tuple_history=[invariants(state)])
    for _ in range(steps):
        groups = site_groups(state)
        total = sum(len(sites) for _, _, sites in groups)
        step = _nth_step(groups, int(rng.integers(total)))
        state = apply(state, *step)
        trace.steps.append(step)
        trace.tuple_history.append(invariants(state))
    trace.counts = counts_of(trace.steps)
    trace.final = state
    return trace


def _nth_step(groups, n: int) -> Step:
    for kind, direction, sites in groups:
        if n < len(sites):
            return Step(kind, direction, sites[n])
        n -= len(sites)
    raise IndexError(n)


def format_trace(trace: WalkTrace) -> str:
    lines = ["plan v1", f"# seed = {trace.seed}", f"# tuple 0 = {trace.tuple_history[0]}"]
    for k, step in enumerate(trace.steps, 1):
        lines.append(str(step))
        lines.append(f"# tuple {k} = {trace.tuple_history[k]}")
    return "\n".join(lines) + "\n"
