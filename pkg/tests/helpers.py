"""Shared builders for tests."""

from __future__ import annotations

from hypothesis import strategies as st

from stablemaps.explorer import random_walk
from stablemaps.state import CURVE, CuspCircuit, MapState, SurfaceComponent


def surface(sid: str, genus: int = 0, *swallowtails: int) -> SurfaceComponent:
    return SurfaceComponent(sid, genus, tuple(CuspCircuit(s) for s in swallowtails))


def state(*surfaces: SurfaceComponent) -> MapState:
    return MapState(surfaces)


def curves(n: int) -> tuple[CuspCircuit, ...]:
    return (CURVE,) * n


@st.composite
def reachable(draw, max_steps: int = 12) -> MapState:
    """A state reached by a seeded random walk from the canonical projection."""
    seed = draw(st.integers(0, 2**32 - 1))
    steps = draw(st.integers(0, max_steps))
    return random_walk(seed, steps).final
