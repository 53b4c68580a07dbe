"""The eleven codimension-one transitions as guarded rewrite rules.

Every rule has a positive form and its exact inverse.  A :class:`Site` names
where the local move happens; :func:`applicable_sites` lists one site per
distinct outcome on each surface (or surface pair), and :func:`apply` checks
the guard before rewriting.

Twist bookkeeping for circuits with swallowtails (``t`` below):

* ``A3e`` and ``A3h2c`` create untwisted 2-swallowtail circuits, and only
  those can be removed again by the inverse moves.
* ``A3hc`` toggles the twist of the circuit that absorbs the cuspidal curve.
* ``A3h0`` merges ``(s1, t1), (s2, t2)`` into ``(s1 + s2 + 2, t1 ^ t2)`` or
  adds two swallowtails to one circuit keeping its twist.
* ``B0g`` reconnects cuspidal edges: it toggles the twist of one circuit, or
  merges two circuits into ``(s1 + s2, t1 ^ t2 ^ 1)``.  It never acts on
  cuspidal curves alone, since that would change ``I_C``.

With these rules ``I_E + I_C + I_G + I_S + (number of twisted circuits)`` is
odd on every reachable state, which is what makes the swallowtail-free parity
law hold in the model.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ParseError, PreconditionError, SiteReferenceError
from .state import (
    CURVE,
    LIP,
    ZERO_INCREMENT,
    CuspCircuit,
    IncrementVector,
    MapState,
    SurfaceComponent,
    SurfaceDirection,
)

__all__ = [
    "TransitionKind",
    "Direction",
    "Site",
    "Step",
    "TransitionCounts",
    "increment_of",
    "applicable_sites",
    "apply",
    "aggregate",
    "counts_of",
    "resolve_site",
    "replay",
    "parse_plan",
    "format_plan",
    "MOVES",
    "successors",
    "legal_steps",
    "site_groups",
]


class TransitionKind(enum.Enum):
    L = "L"
    BMinusG = "B-g"
    BZeroG = "B0g"
    BPlusG = "B+g"
    BV = "Bv"
    PG = "Pg"
    PV = "Pv"
    A3E = "A3e"
    A3H2C = "A3h2c"
    A3HC = "A3hc"
    A3H0 = "A3h0"

    @property
    def order(self) -> int:
        return _KIND_ORDER[self]

    def __str__(self) -> str:
        return self.value


_KIND_ORDER = {k: i for i, k in enumerate(TransitionKind)}


class Direction(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.POSITIVE else -1

    @property
    def inverse(self) -> "Direction":
        return Direction.NEGATIVE if self is Direction.POSITIVE else Direction.POSITIVE

    def __str__(self) -> str:
        return self.value


POS, NEG = Direction.POSITIVE, Direction.NEGATIVE

# Rows of the increment table, positive direction: (dI_E, dI_C, dI_G, dI_S).
_TABLE = {
    TransitionKind.L: IncrementVector(1, 1, 0, 0),
    TransitionKind.BMinusG: IncrementVector(0, -1, -1, 0),
    TransitionKind.BZeroG: IncrementVector(0, 0, -1, 0),
    TransitionKind.BPlusG: IncrementVector(0, 1, -1, 0),
    TransitionKind.BV: IncrementVector(1, 1, 0, 0),
    TransitionKind.PG: IncrementVector(0, -1, -1, 0),
    TransitionKind.PV: IncrementVector(1, -1, 0, 0),
    TransitionKind.A3E: IncrementVector(0, 0, 0, 2),
    TransitionKind.A3H2C: IncrementVector(0, -2, 0, 2),
    TransitionKind.A3HC: IncrementVector(0, -1, 0, 2),
    TransitionKind.A3H0: IncrementVector(0, 0, 0, 2),
}


def increment_of(kind: TransitionKind, direction: Direction) -> IncrementVector:
    row = _TABLE[kind]
    return row if direction is POS else -row


@dataclass(frozen=True)
class Site:
    """Where a transition happens.

    ``surface``/``surface2`` are surface ids; ``circuit``/``circuit2`` index
    into the circuit tuples of ``surface`` and (for cross-surface merges)
    ``surface2``.  Splits of a surface take the genus ``g1`` of the first
    part and the indices ``keep`` of the circuits it retains.  Splits of a
    circuit take the swallowtail count ``s1`` and twist ``twist1`` of the
    first piece.
    """

    surface: str | None = None
    surface2: str | None = None
    circuit: int | None = None
    circuit2: int | None = None
    g1: int | None = None
    keep: tuple[int, ...] | None = None
    s1: int | None = None
    twist1: bool | None = None

    def given(self) -> dict[str, object]:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    def __repr__(self) -> str:
        return "Site({})".format(", ".join(f"{k}={v!r}" for k, v in self.given().items()))

    def __str__(self) -> str:
        parts = []
        for name, value in self.given().items():
            if name == "keep":
                value = ",".join(str(i) for i in value)  # type: ignore[union-attr]
            elif name == "twist1":
                value = int(value)  # type: ignore[arg-type]
            parts.append(f"{name}={value}")
        return " ".join(parts)


class Step(NamedTuple):
    kind: TransitionKind
    direction: Direction
    site: Site = Site()

    def __str__(self) -> str:
        text = f"{self.kind} {self.direction}"
        site = str(self.site)
        return f"{text} {site}" if site else text


# --- helpers -----------------------------------------------------------------


_SERIAL_ID = re.compile(r"S(\d+)\Z")


def _natural(sid: str) -> tuple:
    m = _SERIAL_ID.match(sid)
    return (0, int(m.group(1)), "") if m else (1, 0, sid)


@lru_cache(maxsize=4096)
def _order(ids: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(sorted(range(len(ids)), key=lambda i: _natural(ids[i])))


def _ordered_surfaces(state: MapState) -> list[SurfaceComponent]:
    """Surfaces sorted by id (``S2`` before ``S10``)."""
    surfaces = state.surfaces
    return [surfaces[i] for i in _order(tuple(s.id for s in surfaces))]


@lru_cache(maxsize=65536)
def _grouped(circuits: tuple[CuspCircuit, ...], skip: int) -> tuple[tuple[int, ...], ...]:
    groups: dict[tuple, list[int]] = {}
    for i, c in enumerate(circuits):
        if i != skip:
            groups.setdefault(c.key, []).append(i)
    return tuple(tuple(g) for g in groups.values())


def _groups(circuits: Sequence[CuspCircuit], exclude: int = -1) -> tuple[tuple[int, ...], ...]:
    """Indices of equal circuits, grouped, in order of first occurrence."""
    return _grouped(tuple(circuits), exclude)


def _singles(circuits, pred) -> Iterator[int]:
    for grp in _groups(circuits):
        if pred(circuits[grp[0]]):
            yield grp[0]


def _pairs(circuits, pred) -> Iterator[tuple[int, int]]:
    """Unordered pairs of distinct circuits both satisfying ``pred``."""
    grps = [g for g in _groups(circuits) if pred(circuits[g[0]])]
    for a, ga in enumerate(grps):
        if len(ga) >= 2:
            yield ga[0], ga[1]
        for gb in grps[a + 1 :]:
            yield tuple(sorted((ga[0], gb[0])))  # type: ignore[misc]


def _partitions(surface: SurfaceComponent, exclude: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """(g1, keep) choices; the default (all genus and circuits on part 1) comes first."""
    grps = _groups(surface.circuits, exclude=exclude)

    def keeps(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(grps):
            yield ()
            return
        grp = grps[k]
        for n in range(len(grp), -1, -1):
            for rest in keeps(k + 1):
                yield tuple(grp[:n]) + rest

    for g1 in range(surface.genus, -1, -1):
        for keep in keeps(0):
            yield g1, tuple(sorted(keep))


def _is_curve(c: CuspCircuit) -> bool:
    return c.swallowtails == 0


def _has_st(c: CuspCircuit) -> bool:
    return c.swallowtails >= 2


def _is_lip(c: CuspCircuit) -> bool:
    return c == LIP


def _at_least(n: int):
    return lambda c: c.swallowtails >= n


def _drop(circuits: Sequence[CuspCircuit], *indices: int) -> tuple[CuspCircuit, ...]:
    gone = set(indices)
    return tuple(c for i, c in enumerate(circuits) if i not in gone)


def _put(circuits: Sequence[CuspCircuit], index: int, circuit: CuspCircuit) -> tuple[CuspCircuit, ...]:
    out = list(circuits)
    out[index] = circuit
    return tuple(out)


def _replace_surface(state: MapState, new: SurfaceComponent) -> MapState:
    idx = state.index_of(new.id)
    surfaces = list(state.surfaces)
    surfaces[idx] = new
    return MapState(tuple(surfaces), state.next_serial)


def _split_surface(
    state: MapState, surface: SurfaceComponent, g1: int, part1, part2
) -> MapState:
    new_id = f"S{state.next_serial}"
    first = surface.replace(genus=g1, circuits=part1)
    second = SurfaceComponent(new_id, surface.genus - g1, tuple(part2), surface.direction, surface.parent)
    idx = state.index_of(surface.id)
    surfaces = list(state.surfaces)
    surfaces[idx : idx + 1] = [first, second]
    return MapState(tuple(surfaces), state.next_serial + 1)


def _merge_surfaces(state: MapState, keep: SurfaceComponent, gone: SurfaceComponent, circuits) -> MapState:
    parent = keep.parent
    if parent == gone.id:
        parent = gone.parent
    merged = keep.replace(genus=keep.genus + gone.genus, circuits=circuits, parent=parent)
    surfaces = []
    for s in state.surfaces:
        if s.id == gone.id:
            continue
        if s.id == keep.id:
            s = merged
        elif s.parent == gone.id:
            s = s.replace(parent=keep.id)
        surfaces.append(s)
    return MapState(tuple(surfaces), state.next_serial)


def _remove_surface(state: MapState, gone: SurfaceComponent) -> MapState:
    surfaces = tuple(
        s.replace(parent=gone.parent) if s.parent == gone.id else s for s in state.surfaces if s.id != gone.id
    )
    return MapState(surfaces, state.next_serial)


# --- site resolution -------------------------------------------------------


def _need(site: Site, required: set[str], optional: set[str] = frozenset()) -> None:  # type: ignore[assignment]
    given = set(site.given())
    missing = required - given
    if missing:
        raise PreconditionError(f"site is missing {', '.join(sorted(missing))}")
    extra = given - required - optional
    if extra:
        raise PreconditionError(f"site field(s) {', '.join(sorted(extra))} do not apply here")


def _guard(ok: bool, message: str) -> None:
    if not ok:
        raise PreconditionError(message)


def _surface(state: MapState, sid: str | None) -> SurfaceComponent:
    if sid is None:
        raise PreconditionError("site needs a surface")
    return state.surface(sid)


def _distinct(a: int, b: int) -> None:
    if a == b:
        raise PreconditionError("the two circuits must be distinct")


# --- rules -------------------------------------------------------------------
#
# Each rule is a pair (sites, rewrite).  ``sites`` yields canonical candidates,
# either for one surface (most rules) or for the whole state (see _GLOBAL);
# ``rewrite(state, site)`` validates and rewrites.


def _sites_L_pos(state):
    yield Site()


def _L_pos(state, site):
    _need(site, set())
    new = SurfaceComponent(f"S{state.next_serial}", 0, (CURVE,), SurfaceDirection.UNSET, None)
    return MapState(state.surfaces + (new,), state.next_serial + 1)


def _sites_L_neg(s):
    if s.genus == 0 and s.circuits == (CURVE,):
        yield Site(surface=s.id)


def _L_neg(state, site):
    _need(site, {"surface"})
    s = _surface(state, site.surface)
    _guard(s.genus == 0 and s.circuits == (CURVE,), "L- needs a sphere carrying exactly one cuspidal curve")
    _guard(len(state.surfaces) >= 2, "L- cannot remove the last singular surface")
    return _remove_surface(state, s)


def _sites_per_circuit(pred, genus_min=0):
    def gen(s):
        if s.genus >= genus_min:
            for i in _singles(s.circuits, pred):
                yield Site(surface=s.id, circuit=i)

    return gen


def _sites_per_pair(pred, genus_min=0):
    def gen(s):
        if s.genus >= genus_min:
            for i, j in _pairs(s.circuits, pred):
                yield Site(surface=s.id, circuit=i, circuit2=j)

    return gen


def _sites_per_surface(s):
    yield Site(surface=s.id)


def _one(state, site, pred, what, genus_min=0, optional=frozenset()):
    _need(site, {"surface", "circuit"}, set(optional))
    s = _surface(state, site.surface)
    c = s.circuit(site.circuit)  # type: ignore[arg-type]
    _guard(s.genus >= genus_min, f"surface {s.id} needs genus >= {genus_min}")
    _guard(pred(c), f"circuit {site.circuit} on {s.id} must be {what}")
    return s, c


def _two(state, site, pred1, pred2, what, genus_min=0):
    _need(site, {"surface", "circuit", "circuit2"})
    s = _surface(state, site.surface)
    c1 = s.circuit(site.circuit)  # type: ignore[arg-type]
    c2 = s.circuit(site.circuit2)  # type: ignore[arg-type]
    _distinct(site.circuit, site.circuit2)  # type: ignore[arg-type]
    _guard(s.genus >= genus_min, f"surface {s.id} needs genus >= {genus_min}")
    _guard(pred1(c1) and pred2(c2), f"circuits on {s.id} must be {what}")
    return s, c1, c2


# B-g: two cuspidal curves merge, genus drops.
def _Bm_pos(state, site):
    s, _, _ = _two(state, site, _is_curve, _is_curve, "two cuspidal curves", genus_min=1)
    return _replace_surface(state, s.replace(genus=s.genus - 1, circuits=_drop(s.circuits, site.circuit2)))


def _Bm_neg(state, site):
    s, _ = _one(state, site, _is_curve, "a cuspidal curve")
    return _replace_surface(state, s.replace(genus=s.genus + 1, circuits=s.circuits + (CURVE,)))


# B0g: edges reconnect; the cuspidal-curve count is untouched.
def _sites_B0_pos(s):
    if s.genus < 1:
        return
    singles = list(_singles(s.circuits, _has_st))
    pairs = list(_pairs(s.circuits, _has_st))
    for i in sorted(set(singles) | {p[0] for p in pairs}):
        if i in singles:
            yield Site(surface=s.id, circuit=i)
        for a, b in pairs:
            if a == i:
                yield Site(surface=s.id, circuit=a, circuit2=b)


def _B0_pos(state, site):
    if site.circuit2 is None:
        s, c = _one(state, site, _has_st, "a circuit with swallowtails", genus_min=1)
        new = _put(s.circuits, site.circuit, CuspCircuit(c.swallowtails, not c.twisted))  # type: ignore[arg-type]
    else:
        s, c1, c2 = _two(state, site, _has_st, _has_st, "two circuits with swallowtails", genus_min=1)
        merged = CuspCircuit(c1.swallowtails + c2.swallowtails, not (c1.twisted ^ c2.twisted))
        new = _drop(_put(s.circuits, site.circuit, merged), site.circuit2)  # type: ignore[arg-type]
    return _replace_surface(state, s.replace(genus=s.genus - 1, circuits=new))


def _split_choices(c: CuspCircuit, lo: int, hi: int, twist_of_rest):
    """Yield (s1, t1) for splitting ``c`` into (s1, t1) + (rest, t2), deduplicated."""
    seen = set()
    for s1 in range(lo, hi + 1, 2):
        for t1 in (False, True):
            rest = twist_of_rest(c, s1, t1)
            outcome = tuple(sorted([(s1, t1), rest]))
            if outcome not in seen:
                seen.add(outcome)
                yield s1, t1


def _b0_rest(c, s1, t1):
    return (c.swallowtails - s1, c.twisted ^ t1 ^ True)


def _sites_B0_neg(s):
    for i in _singles(s.circuits, _has_st):
        c = s.circuits[i]
        yield Site(surface=s.id, circuit=i)
        for s1, t1 in _split_choices(c, 2, c.swallowtails - 2, _b0_rest):
            yield Site(surface=s.id, circuit=i, s1=s1, twist1=t1)


def _B0_neg(state, site):
    if site.s1 is None:
        s, c = _one(state, site, _has_st, "a circuit with swallowtails")
        new = _put(s.circuits, site.circuit, CuspCircuit(c.swallowtails, not c.twisted))  # type: ignore[arg-type]
    else:
        s, c = _one(state, site, _at_least(4), "a circuit with at least 4 swallowtails", optional={"s1", "twist1"})
        s1, t1 = site.s1, bool(site.twist1)
        _guard(s1 % 2 == 0 and 2 <= s1 <= c.swallowtails - 2, f"s1={s1} does not split {c.swallowtails} swallowtails")
        rest = CuspCircuit(*_b0_rest(c, s1, t1))
        new = _put(s.circuits, site.circuit, CuspCircuit(s1, t1)) + (rest,)  # type: ignore[arg-type]
    return _replace_surface(state, s.replace(genus=s.genus + 1, circuits=new))


# B+g: one cuspidal curve splits in two, genus drops.
def _Bp_pos(state, site):
    s, _ = _one(state, site, _is_curve, "a cuspidal curve", genus_min=1)
    return _replace_surface(state, s.replace(genus=s.genus - 1, circuits=s.circuits + (CURVE,)))


def _Bp_neg(state, site):
    s, _, _ = _two(state, site, _is_curve, _is_curve, "two cuspidal curves")
    return _replace_surface(state, s.replace(genus=s.genus + 1, circuits=_drop(s.circuits, site.circuit2)))


# Surface splits (Bv, Pv positive) and merges (negative).
def _sites_split(s):
    for i in _singles(s.circuits, _is_curve):
        for g1, keep in _partitions(s, i):
            yield Site(surface=s.id, circuit=i, g1=g1, keep=keep)


def _split_parts(state, site, with_curve: bool):
    _need(site, {"surface", "circuit"}, {"g1", "keep"})
    s = _surface(state, site.surface)
    c = s.circuit(site.circuit)  # type: ignore[arg-type]
    _guard(_is_curve(c), f"circuit {site.circuit} on {s.id} must be a cuspidal curve")
    g1 = s.genus if site.g1 is None else site.g1
    _guard(0 <= g1 <= s.genus, f"g1={g1} is not a genus partition of {s.genus}")
    others = [j for j in range(len(s.circuits)) if j != site.circuit]
    keep = set(others if site.keep is None else site.keep)
    if site.keep is not None:
        if len(keep) != len(site.keep):
            raise PreconditionError("keep lists a circuit twice")
        for j in keep:
            if j == site.circuit:
                raise PreconditionError("keep cannot contain the split circuit")
            s.circuit(j)
    part1 = [cc for j, cc in enumerate(s.circuits) if j in keep or (with_curve and j == site.circuit)]
    part2 = [cc for j, cc in enumerate(s.circuits) if j not in keep and j != site.circuit]
    if with_curve:
        part2.append(CURVE)
    return _split_surface(state, s, g1, part1, part2)


def _Bv_pos(state, site):
    return _split_parts(state, site, with_curve=True)


def _Pv_pos(state, site):
    return _split_parts(state, site, with_curve=False)


def _first_curve(s: SurfaceComponent) -> int | None:
    return next(_singles(s.circuits, _is_curve), None)


@lru_cache(maxsize=1 << 14)
def _merge_sites(layout: tuple[tuple[str, int | None], ...], need_curves: bool) -> tuple[Site, ...]:
    out = []
    for a, (ida, ca) in enumerate(layout):
        for idb, cb in layout[a + 1 :]:
            if not need_curves:
                out.append(Site(surface=ida, surface2=idb))
            elif ca is not None and cb is not None:
                out.append(Site(surface=ida, surface2=idb, circuit=ca, circuit2=cb))
    return tuple(out)


def _layout(state) -> tuple[tuple[str, int | None], ...]:
    return tuple((s.id, _first_curve(s)) for s in _ordered_surfaces(state))


def _sites_Bv_neg(state):
    return _merge_sites(_layout(state), True)


def _pair_of_surfaces(state, site):
    s1 = _surface(state, site.surface)
    if site.surface2 is None:
        raise PreconditionError("site needs surface2")
    s2 = state.surface(site.surface2)
    _guard(s1.id != s2.id, "the two surfaces must be distinct")
    return s1, s2


def _Bv_neg(state, site):
    _need(site, {"surface", "surface2", "circuit", "circuit2"})
    s1, s2 = _pair_of_surfaces(state, site)
    c1 = s1.circuit(site.circuit)
    c2 = s2.circuit(site.circuit2)
    _guard(_is_curve(c1) and _is_curve(c2), "Bv- joins two cuspidal curves on different surfaces")
    return _merge_surfaces(state, s1, s2, s1.circuits + _drop(s2.circuits, site.circuit2))


def _sites_Pv_neg(state):
    return _merge_sites(tuple((s.id, None) for s in _ordered_surfaces(state)), False)


def _Pv_neg(state, site):
    _need(site, {"surface", "surface2"})
    s1, s2 = _pair_of_surfaces(state, site)
    return _merge_surfaces(state, s1, s2, s1.circuits + s2.circuits + (CURVE,))


# Pg: a cuspidal curve and a handle disappear together.
def _Pg_pos(state, site):
    s, _ = _one(state, site, _is_curve, "a cuspidal curve", genus_min=1)
    return _replace_surface(state, s.replace(genus=s.genus - 1, circuits=_drop(s.circuits, site.circuit)))


def _Pg_neg(state, site):
    _need(site, {"surface"})
    s = _surface(state, site.surface)
    return _replace_surface(state, s.replace(genus=s.genus + 1, circuits=s.circuits + (CURVE,)))


# A3e: lips with two swallowtails.
def _A3e_pos(state, site):
    _need(site, {"surface"})
    s = _surface(state, site.surface)
    return _replace_surface(state, s.replace(circuits=s.circuits + (LIP,)))


def _A3e_neg(state, site):
    s, _ = _one(state, site, _is_lip, "an untwisted circuit with exactly 2 swallowtails")
    return _replace_surface(state, s.replace(circuits=_drop(s.circuits, site.circuit)))


def _A3h2c_pos(state, site):
    s, _, _ = _two(state, site, _is_curve, _is_curve, "two cuspidal curves")
    return _replace_surface(state, s.replace(circuits=_drop(_put(s.circuits, site.circuit, LIP), site.circuit2)))


def _A3h2c_neg(state, site):
    s, _ = _one(state, site, _is_lip, "an untwisted circuit with exactly 2 swallowtails")
    return _replace_surface(state, s.replace(circuits=_put(s.circuits, site.circuit, CURVE) + (CURVE,)))


def _sites_A3hc_pos(s):
    for i in _singles(s.circuits, _is_curve):
        for j in _singles(s.circuits, _has_st):
            yield Site(surface=s.id, circuit=i, circuit2=j)


def _A3hc_pos(state, site):
    s, _, c2 = _two(state, site, _is_curve, _has_st, "a cuspidal curve and a circuit with swallowtails")
    grown = CuspCircuit(c2.swallowtails + 2, not c2.twisted)
    return _replace_surface(state, s.replace(circuits=_drop(_put(s.circuits, site.circuit2, grown), site.circuit)))


def _A3hc_neg(state, site):
    s, c = _one(state, site, _at_least(4), "a circuit with at least 4 swallowtails")
    shrunk = CuspCircuit(c.swallowtails - 2, not c.twisted)
    return _replace_surface(state, s.replace(circuits=_put(s.circuits, site.circuit, shrunk) + (CURVE,)))


def _sites_A3h0_pos(s):
    singles = list(_singles(s.circuits, _has_st))
    pairs = list(_pairs(s.circuits, _has_st))
    for i in sorted(set(singles) | {p[0] for p in pairs}):
        if i in singles:
            yield Site(surface=s.id, circuit=i)
        for a, b in pairs:
            if a == i:
                yield Site(surface=s.id, circuit=a, circuit2=b)


def _A3h0_pos(state, site):
    if site.circuit2 is None:
        s, c = _one(state, site, _has_st, "a circuit with swallowtails")
        new = _put(s.circuits, site.circuit, CuspCircuit(c.swallowtails + 2, c.twisted))  # type: ignore[arg-type]
    else:
        s, c1, c2 = _two(state, site, _has_st, _has_st, "two circuits with swallowtails")
        merged = CuspCircuit(c1.swallowtails + c2.swallowtails + 2, c1.twisted ^ c2.twisted)
        new = _drop(_put(s.circuits, site.circuit, merged), site.circuit2)  # type: ignore[arg-type]
    return _replace_surface(state, s.replace(circuits=new))


def _h0_rest(c, s1, t1):
    return (c.swallowtails - 2 - s1, c.twisted ^ t1)


def _sites_A3h0_neg(s):
    for i in _singles(s.circuits, _at_least(4)):
        c = s.circuits[i]
        yield Site(surface=s.id, circuit=i)
        for s1, t1 in _split_choices(c, 2, c.swallowtails - 4, _h0_rest):
            yield Site(surface=s.id, circuit=i, s1=s1, twist1=t1)


def _A3h0_neg(state, site):
    s, c = _one(state, site, _at_least(4), "a circuit with at least 4 swallowtails", optional={"s1", "twist1"})
    if site.s1 is None:
        _need(site, {"surface", "circuit"})
        new = _put(s.circuits, site.circuit, CuspCircuit(c.swallowtails - 2, c.twisted))  # type: ignore[arg-type]
    else:
        s1, t1 = site.s1, bool(site.twist1)
        _guard(
            s1 % 2 == 0 and 2 <= s1 <= c.swallowtails - 4,
            f"s1={s1} does not split {c.swallowtails} swallowtails into two circuits",
        )
        rest = CuspCircuit(*_h0_rest(c, s1, t1))
        new = _put(s.circuits, site.circuit, CuspCircuit(s1, t1)) + (rest,)  # type: ignore[arg-type]
    return _replace_surface(state, s.replace(circuits=new))


K = TransitionKind
_RULES = {
    (K.L, POS): (_sites_L_pos, _L_pos),
    (K.L, NEG): (_sites_L_neg, _L_neg),
    (K.BMinusG, POS): (_sites_per_pair(_is_curve, genus_min=1), _Bm_pos),
    (K.BMinusG, NEG): (_sites_per_circuit(_is_curve), _Bm_neg),
    (K.BZeroG, POS): (_sites_B0_pos, _B0_pos),
    (K.BZeroG, NEG): (_sites_B0_neg, _B0_neg),
    (K.BPlusG, POS): (_sites_per_circuit(_is_curve, genus_min=1), _Bp_pos),
    (K.BPlusG, NEG): (_sites_per_pair(_is_curve), _Bp_neg),
    (K.BV, POS): (_sites_split, _Bv_pos),
    (K.BV, NEG): (_sites_Bv_neg, _Bv_neg),
    (K.PG, POS): (_sites_per_circuit(_is_curve, genus_min=1), _Pg_pos),
    (K.PG, NEG): (_sites_per_surface, _Pg_neg),
    (K.PV, POS): (_sites_split, _Pv_pos),
    (K.PV, NEG): (_sites_Pv_neg, _Pv_neg),
    (K.A3E, POS): (_sites_per_surface, _A3e_pos),
    (K.A3E, NEG): (_sites_per_circuit(_is_lip), _A3e_neg),
    (K.A3H2C, POS): (_sites_per_pair(_is_curve), _A3h2c_pos),
    (K.A3H2C, NEG): (_sites_per_circuit(_is_lip), _A3h2c_neg),
    (K.A3HC, POS): (_sites_A3hc_pos, _A3hc_pos),
    (K.A3HC, NEG): (_sites_per_circuit(_at_least(4)), _A3hc_neg),
    (K.A3H0, POS): (_sites_A3h0_pos, _A3h0_pos),
    (K.A3H0, NEG): (_sites_A3h0_neg, _A3h0_neg),
}
del K

MOVES: tuple[tuple[TransitionKind, Direction], ...] = tuple(
    (k, d) for k in TransitionKind for d in (POS, NEG)
)


_GLOBAL = {(TransitionKind.L, POS), (TransitionKind.BV, NEG), (TransitionKind.PV, NEG)}


_MOVE_INDEX = {move: i for i, move in enumerate(MOVES)}


@lru_cache(maxsize=1 << 16)
def _surface_sites(surface: SurfaceComponent) -> tuple[tuple[Site, ...], ...]:
    """Local site lists of one surface, one entry per move (empty for global moves)."""
    return tuple(() if move in _GLOBAL else tuple(_RULES[move][0](surface)) for move in MOVES)


def _sites(state: MapState, kind: TransitionKind, direction: Direction, tables) -> Iterable[Site]:
    if (kind, direction) in _GLOBAL:
        return _RULES[kind, direction][0](state)
    if kind is TransitionKind.L and len(state.surfaces) < 2:
        return ()
    m = _MOVE_INDEX[kind, direction]
    return [site for table in tables for site in table[m]]


def _tables(state: MapState):
    return [_surface_sites(s) for s in _ordered_surfaces(state)]


def applicable_sites(state: MapState, kind: TransitionKind, direction: Direction) -> list[Site]:
    """Sites where ``(kind, direction)`` may fire, in tie-break order.

    Sites that differ only by swapping equal circuits on one surface give the
    same result, so only the lowest-index representative is listed.
    """
    return list(_sites(state, kind, direction, _tables(state)))


def apply(state: MapState, kind: TransitionKind, direction: Direction, site: Site = Site()) -> MapState:
    return _RULES[kind, direction][1](state, site)


_MOVE_META = tuple((k, d, (k, d) in _GLOBAL, _RULES[k, d][0]) for k, d in MOVES)
_L_NEG = _MOVE_INDEX[TransitionKind.L, NEG]


def site_groups(state: MapState) -> list[tuple[TransitionKind, Direction, Sequence[Site]]]:
    """Applicable sites grouped by move, in tie-break order; empty groups omitted."""
    tables = _tables(state)
    lonely = len(state.surfaces) < 2
    out = []
    for m, (kind, direction, is_global, gen) in enumerate(_MOVE_META):
        if is_global:
            sites: Sequence[Site] = tuple(gen(state))
            if sites:
                out.append((kind, direction, sites))
        elif not (lonely and m == _L_NEG):
            for table in tables:
                if table[m]:
                    out.append((kind, direction, table[m]))
    return out


def legal_steps(state: MapState) -> list[Step]:
    return [Step(k, d, site) for k, d, sites in site_groups(state) for site in sites]


def successors(state: MapState) -> Iterator[tuple[Step, MapState]]:
    """Every legal one-step rewrite of ``state`` in tie-break order."""
    for step in legal_steps(state):
        yield step, _RULES[step.kind, step.direction][1](state, step.site)


# --- counts --------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionCounts:
    """Signed net crossing count of each transition along a path."""

    ell: int = 0
    b_minus_g: int = 0
    b_zero_g: int = 0
    b_plus_g: int = 0
    b_v: int = 0
    p_g: int = 0
    p_v: int = 0
    a3e: int = 0
    a3h2c: int = 0
    a3hc: int = 0
    a3h0: int = 0

    def __getitem__(self, kind: TransitionKind) -> int:
        return getattr(self, _COUNT_FIELD[kind])

    def __add__(self, other: "TransitionCounts") -> "TransitionCounts":
        return TransitionCounts(*(a + b for a, b in zip(self.values(), other.values())))

    def values(self) -> tuple[int, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_kinds(cls, mapping: dict[TransitionKind, int]) -> "TransitionCounts":
        return cls(**{_COUNT_FIELD[k]: v for k, v in mapping.items()})


_COUNT_FIELD = dict(zip(TransitionKind, (f.name for f in fields(TransitionCounts))))


def counts_of(plan: Iterable) -> TransitionCounts:
    """Net signed tally; accepts steps or bare ``(kind, direction)`` pairs."""
    tally = {k: 0 for k in TransitionKind}
    for step in plan:
        kind, direction = step[0], step[1]
        tally[kind] += direction.sign
    return TransitionCounts.from_kinds(tally)


def aggregate(counts: TransitionCounts) -> IncrementVector:
    total = ZERO_INCREMENT
    for kind in TransitionKind:
        total = total + _TABLE[kind] * counts[kind]
    return total


# --- plans -----------------------------------------------------------------


def _matches(candidate: Site, query: Site) -> bool:
    for name, value in query.given().items():
        have = getattr(candidate, name)
        if name == "keep" and have is not None:
            if sorted(have) != sorted(value):  # type: ignore[arg-type]
                return False
        elif have != value:
            return False
    return True


def resolve_site(state: MapState, kind: TransitionKind, direction: Direction, query: Site = Site()) -> Site:
    """First applicable site agreeing with every field set in ``query``.

    If no listed site matches, ``query`` itself is returned unchanged, so a
    following :func:`apply` reports the precise guard or reference failure.
    """
    for site in applicable_sites(state, kind, direction):
        if _matches(site, query):
            return site
    return query


def replay(state: MapState, steps: Iterable[Step]) -> tuple[MapState, list[Step]]:
    """Apply ``steps`` in order, resolving partial sites; returns the final state and resolved steps."""
    done = []
    for n, step in enumerate(steps):
        site = resolve_site(state, step.kind, step.direction, step.site)
        try:
            state = apply(state, step.kind, step.direction, site)
        except (PreconditionError, SiteReferenceError) as exc:
            raise type(exc)(f"step {n + 1} ({step}): {exc}") from exc
        done.append(Step(step.kind, step.direction, site))
    return state, done


PLAN_HEADER = "plan v1"
_SPELLING = {k.value: k for k in TransitionKind}
_INT_KEYS = {"circuit", "circuit2", "g1", "s1"}


def parse_plan(text: str) -> list[Step]:
    lines = [(n, raw.split("#", 1)[0].strip()) for n, raw in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln]
    if not lines or lines[0][1] != PLAN_HEADER:
        raise ParseError(f"first line must be {PLAN_HEADER!r}", lines[0][0] if lines else 1)
    steps = []
    for lineno, line in lines[1:]:
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError("a step needs a kind and a direction", lineno)
        if tokens[0] not in _SPELLING:
            raise ParseError(f"unknown transition {tokens[0]!r}", lineno)
        try:
            direction = Direction(tokens[1])
        except ValueError:
            raise ParseError(f"direction must be + or -, got {tokens[1]!r}", lineno) from None
        values: dict[str, object] = {}
        for tok in tokens[2:]:
            key, sep, value = tok.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {tok!r}", lineno)
            if key in values:
                raise ParseError(f"duplicate key {key!r}", lineno)
            try:
                if key in ("surface", "surface2"):
                    if not value:
                        raise ValueError
                    values[key] = value
                elif key in _INT_KEYS:
                    values[key] = int(value)
                elif key == "keep":
                    values[key] = tuple(int(v) for v in value.split(",")) if value else ()
                elif key == "twist1":
                    if value not in ("0", "1"):
                        raise ValueError
                    values[key] = value == "1"
                else:
                    raise ParseError(f"unknown key {key!r}", lineno)
            except ValueError:
                raise ParseError(f"bad value for {key}: {value!r}", lineno) from None
        steps.append(Step(_SPELLING[tokens[0]], direction, Site(**values)))  # type: ignore[arg-type]
    return steps


def format_plan(steps: Iterable[Step], comments: Sequence[str] = ()) -> str:
    lines = [PLAN_HEADER]
    lines.extend(f"# {c}" for c in comments)
    lines.extend(str(s) for s in steps)
    return "\n".join(lines) + "\n"
