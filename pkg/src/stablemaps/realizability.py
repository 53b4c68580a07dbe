"""Parity test and nesting data for fold maps with prescribed singular surfaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ParseError, ValidationError
from .state import MapState, SurfaceComponent, SurfaceDirection, format_state, parse_state, validate

__all__ = [
    "NestingForest",
    "fold_feasible",
    "construct_concentric",
    "construct_nested_pairs",
    "parse_forest",
]

IN, OUT = SurfaceDirection.INWARD, SurfaceDirection.OUTWARD


def fold_feasible(genera: Sequence[int]) -> bool:
    """Necessary condition for a fold map with these surface genera: ``n + sum(genera)`` odd.

    Passing this test does not mean such a fold map exists.
    """
    genera = list(genera)
    if not genera:
        raise DomainError("need at least one surface")
    if any(g < 0 for g in genera):
        raise DomainError(f"genera must be non-negative, got {genera}")
    return (len(genera) + sum(genera)) % 2 == 1


@dataclass(frozen=True)
class NestingForest:
    """Fold singular surfaces with a direction on every node and parent links forming a forest."""

    nodes: tuple[SurfaceComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        problems = validate(MapState(self.nodes))
        for node in self.nodes:
            if node.direction not in (IN, OUT):
                problems.append(f"{node.id}: direction must be inward or outward")
            if node.circuits:
                problems.append(f"{node.id}: fold surfaces carry no cusp circuits")
        if problems:
            raise ValidationError(problems)

    @property
    def genera(self) -> list[int]:
        return [node.genus for node in self.nodes]

    def depth(self, node_id: str) -> int:
        parents = {n.id: n.parent for n in self.nodes}
        d, node = 0, parents[node_id]
        while node is not None:
            d, node = d + 1, parents[node]
        return d

    def children(self, node_id: str | None) -> list[str]:
        return [n.id for n in self.nodes if n.parent == node_id]

    def to_state(self) -> MapState:
        return MapState(self.nodes)

    def format(self) -> str:
        return format_state(self.to_state())


def parse_forest(text: str) -> NestingForest:
    state = parse_state(text)
    try:
        return NestingForest(state.surfaces)
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def construct_concentric(n: int) -> NestingForest:
    """``n`` concentric spheres, ``S1`` innermost and each ``S<i>`` inside ``S<i+1>``.

    Spheres ``1..(n-1)/2`` face outward, the rest inward.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError(f"concentric family needs odd n >= 1, got {n}")
    half = (n - 1) // 2
    nodes = [
        SurfaceComponent(
            f"S{i}",
            0,
            (),
            OUT if i <= half else IN,
            f"S{i + 1}" if i < n else None,
        )
        for i in range(1, n + 1)
    ]
    return NestingForest(tuple(nodes))


def construct_nested_pairs(k: Sequence[int]) -> NestingForest:
    """An inward sphere ``S1`` enclosing, for each ``k[i]``, two nested genus-``k[i]`` surfaces.

    Pair ``i`` is ``S<2i+2>`` (outer, inward) containing ``S<2i+3>`` (inner, outward).
    """
    k = list(k)
    if not k:
        raise DomainError("need at least one pair")
    if any(g <= 0 for g in k):
        raise DomainError(f"pair genera must be positive, got {k}")
    nodes = [SurfaceComponent("S1", 0, (), IN, None)]
    for i, g in enumerate(k):
        outer, inner = f"S{2 * i + 2}", f"S{2 * i + 3}"
        nodes.append(SurfaceComponent(outer, g, (), IN, "S1"))
        nodes.append(SurfaceComponent(inner, g, (), OUT, outer))
    return NestingForest(tuple(nodes))
