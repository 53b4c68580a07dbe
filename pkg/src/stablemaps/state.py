"""Combinatorial model of the singular set of a stable map S^3 -> R^3.

A map is described by its singular surfaces.  Each surface has a genus and a
multiset of cuspidal circuits; a circuit is summarised by how many swallowtail
points sit on it.  A circuit without swallowtails is a cuspidal curve, the
others are chains of cuspidal edges.

Circuits carrying swallowtails also hold a ``twisted`` bit.  Counts alone
cannot tell apart a lip that can be collapsed again from a circuit whose
swallowtails were produced by absorbing a cuspidal curve, and the parity law
for swallowtail-free maps is lost without that distinction (see
:mod:`stablemaps.transitions` for how the bit evolves).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import ParseError, SiteReferenceError, ValidationError

__all__ = [
    "CuspCircuit",
    "SurfaceDirection",
    "SurfaceComponent",
    "MapState",
    "InvariantTuple",
    "IncrementVector",
    "Violation",
    "canonical_projection",
    "invariants",
    "validate",
    "canonical_key",
    "parse_state",
    "format_state",
]


class InvariantTuple(NamedTuple):
    """Global invariants ``(I_E, I_C, I_G, I_S)``.

    ``is_`` carries the trailing underscore only because ``is`` is reserved.
    """

    ie: int
    ic: int
    ig: int
    is_: int

    @property
    def iv(self) -> int:
        """Number of regular components; the complement of the singular set in S^3."""
        return self.ie + 1

    @property
    def total(self) -> int:
        return self.ie + self.ic + self.ig + self.is_

    def __add__(self, other):  # type: ignore[override]
        return InvariantTuple(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other) -> "IncrementVector":
        return IncrementVector(*(a - b for a, b in zip(self, other)))

    def __str__(self) -> str:
        return "({},{},{},{})".format(*self)


class IncrementVector(NamedTuple):
    d_ie: int
    d_ic: int
    d_ig: int
    d_is: int

    def __add__(self, other):  # type: ignore[override]
        return IncrementVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return IncrementVector(*(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return IncrementVector(*(-a for a in self))

    def __mul__(self, k: int):  # type: ignore[override]
        return IncrementVector(*(a * k for a in self))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "({},{},{},{})".format(*self)


ZERO_INCREMENT = IncrementVector(0, 0, 0, 0)


@dataclass(frozen=True, order=True)
class CuspCircuit:
    swallowtails: int = 0
    twisted: bool = False

    @property
    def is_curve(self) -> bool:
        """True for a cuspidal curve (no swallowtails)."""
        return self.swallowtails == 0

    @property
    def key(self) -> tuple[int, bool]:
        return (self.swallowtails, self.twisted)


CURVE = CuspCircuit(0)
LIP = CuspCircuit(2)


class SurfaceDirection(str, enum.Enum):
    INWARD = "inward"
    OUTWARD = "outward"
    UNSET = "unset"


@dataclass(frozen=True)
class SurfaceComponent:
    id: str
    genus: int = 0
    circuits: tuple[CuspCircuit, ...] = ()
    direction: SurfaceDirection = SurfaceDirection.UNSET
    parent: str | None = None

    def replace(self, **changes) -> "SurfaceComponent":
        values = {
            "id": self.id,
            "genus": self.genus,
            "circuits": self.circuits,
            "direction": self.direction,
            "parent": self.parent,
        }
        values.update(changes)
        values["circuits"] = tuple(values["circuits"])
        return SurfaceComponent(**values)

    def circuit(self, index: int) -> CuspCircuit:
        if not 0 <= index < len(self.circuits):
            raise SiteReferenceError(f"surface {self.id} has no circuit {index}")
        return self.circuits[index]


_SERIAL = re.compile(r"S(\d+)\Z")


def _next_serial(surfaces: Iterable[SurfaceComponent]) -> int:
    serials = [int(m.group(1)) for s in surfaces if (m := _SERIAL.match(s.id))]
    return max(serials, default=-1) + 1


@dataclass(frozen=True)
class MapState:
    """Singular-set datum of a stable map.

    ``next_serial`` feeds fresh surface ids (``S<n>``) so that ids are never
    reused within one plan; it takes no part in equality.
    """

    surfaces: tuple[SurfaceComponent, ...]
    next_serial: int = field(default=-1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        if self.next_serial < 0:
            object.__setattr__(self, "next_serial", _next_serial(self.surfaces))

    def index_of(self, surface_id: str) -> int:
        for i, s in enumerate(self.surfaces):
            if s.id == surface_id:
                return i
        raise SiteReferenceError(f"no surface with id {surface_id!r}")

    def surface(self, surface_id: str) -> SurfaceComponent:
        return self.surfaces[self.index_of(surface_id)]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.surfaces)


def canonical_projection() -> MapState:
    """The base map: one inward singular sphere, no cusps."""
    return MapState((SurfaceComponent("S0", 0, (), SurfaceDirection.INWARD, None),))


@dataclass(frozen=True)
class Violation:
    rule: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.where}: {self.message}"


def validate(state: MapState) -> list[Violation]:
    out: list[Violation] = []
    if not state.surfaces:
        out.append(Violation("empty-singular-set", "state", "a map of S^3 has at least one singular surface"))
    seen: set[str] = set()
    for s in state.surfaces:
        if s.id in seen:
            out.append(Violation("duplicate-id", s.id, "surface id used twice"))
        seen.add(s.id)
        if s.genus < 0:
            out.append(Violation("negative-genus", s.id, f"genus {s.genus}"))
        if not isinstance(s.direction, SurfaceDirection):
            out.append(Violation("bad-direction", s.id, f"direction {s.direction!r}"))
        for i, c in enumerate(s.circuits):
            where = f"{s.id}/circuit {i}"
            if c.swallowtails < 0:
                out.append(Violation("negative-swallowtails", where, f"{c.swallowtails} swallowtails"))
            elif c.swallowtails % 2:
                out.append(Violation("odd-swallowtails", where, f"{c.swallowtails} swallowtails"))
            if c.twisted and c.swallowtails == 0:
                out.append(Violation("twisted-curve", where, "only circuits with swallowtails carry a twist"))
    parents = {s.id: s.parent for s in state.surfaces}
    for s in state.surfaces:
        if s.parent is not None and s.parent not in parents:
            out.append(Violation("dangling-parent", s.id, f"parent {s.parent!r} does not exist"))
    for start in parents:
        node, steps = start, 0
        while node is not None and node in parents and steps <= len(parents):
            node = parents[node]
            steps += 1
        if steps > len(parents):
            out.append(Violation("parent-cycle", start, "parent links are not a forest"))
    return out


def ensure_valid(state: MapState) -> MapState:
    problems = validate(state)
    if problems:
        raise ValidationError(problems)
    return state


def invariants(state: MapState) -> InvariantTuple:
    ensure_valid(state)
    ic = sum(1 for s in state.surfaces for c in s.circuits if c.is_curve)
    ig = sum(s.genus for s in state.surfaces)
    isw = sum(c.swallowtails for s in state.surfaces for c in s.circuits)
    return InvariantTuple(len(state.surfaces), ic, ig, isw)


def surface_key(surface: SurfaceComponent) -> tuple:
    return (surface.genus, tuple(sorted(c.key for c in surface.circuits)))


def canonical_key(state: MapState) -> tuple:
    """Id-free normal form; two states with the same key admit the same moves."""
    return tuple(sorted(surface_key(s) for s in state.surfaces))


def state_from_key(key: tuple) -> MapState:
    surfaces = [
        SurfaceComponent(f"S{i}", genus, tuple(CuspCircuit(s, t) for s, t in circuits))
        for i, (genus, circuits) in enumerate(key)
    ]
    return MapState(tuple(surfaces))


# --- text format -----------------------------------------------------------

STATE_HEADER = "mapstate v1"
_TOKEN = re.compile(r"[^\s=#]+\Z")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _keyvals(tokens: list[str], allowed: set[str], lineno: int) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        if key not in allowed:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", lineno)
        out[key] = value
    return out


def _int(value: str, what: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {value!r}", lineno) from None


def parse_state(text: str) -> MapState:
    """Parse the line-oriented ``mapstate v1`` format.

    Raises :class:`ParseError` on any malformed line, unknown key, odd
    swallowtail count or dangling parent id.
    """
    lines = [(n, _strip(raw)) for n, raw in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln]
    if not lines or lines[0][1] != STATE_HEADER:
        raise ParseError(f"first line must be {STATE_HEADER!r}", lines[0][0] if lines else 1)
    order: list[str] = []
    attrs: dict[str, dict] = {}
    circuits: dict[str, list[CuspCircuit]] = {}
    for lineno, line in lines[1:]:
        kind, *rest = line.split()
        if kind == "surface":
            if not rest or not _TOKEN.match(rest[0]):
                raise ParseError("surface line needs an id", lineno)
            sid = rest[0]
            if sid in attrs:
                raise ParseError(f"surface {sid!r} declared twice", lineno)
            kv = _keyvals(rest[1:], {"genus", "direction", "parent"}, lineno)
            if "genus" not in kv:
                raise ParseError("surface line needs genus=", lineno)
            genus = _int(kv["genus"], "genus", lineno)
            if genus < 0:
                raise ParseError(f"negative genus {genus}", lineno)
            try:
                direction = SurfaceDirection(kv.get("direction", "unset"))
            except ValueError:
                raise ParseError(f"bad direction {kv['direction']!r}", lineno) from None
            parent = kv.get("parent", "none")
            attrs[sid] = {
                "genus": genus,
                "direction": direction,
                "parent": None if parent == "none" else parent,
                "lineno": lineno,
            }
            order.append(sid)
            circuits[sid] = []
        elif kind == "circuit":
            if not rest:
                raise ParseError("circuit line needs a surface id", lineno)
            sid = rest[0]
            if sid not in attrs:
                raise ParseError(f"circuit on undeclared surface {sid!r}", lineno)
            kv = _keyvals(rest[1:], {"swallowtails", "twisted"}, lineno)
            if "swallowtails" not in kv:
                raise ParseError("circuit line needs swallowtails=", lineno)
            count = _int(kv["swallowtails"], "swallowtails", lineno)
            if count < 0 or count % 2:
                raise ParseError(f"swallowtail count must be even and >= 0, got {count}", lineno)
            twisted = kv.get("twisted", "0")
            if twisted not in ("0", "1"):
                raise ParseError(f"twisted must be 0 or 1, got {twisted!r}", lineno)
            if twisted == "1" and count == 0:
                raise ParseError("a circuit without swallowtails cannot be twisted", lineno)
            circuits[sid].append(CuspCircuit(count, twisted == "1"))
        else:
            raise ParseError(f"unknown record {kind!r}", lineno)
    if not order:
        raise ParseError("state has no surfaces", lines[0][0])
    for sid in order:
        parent = attrs[sid]["parent"]
        if parent is not None and parent not in attrs:
            raise ParseError(f"dangling parent {parent!r}", attrs[sid]["lineno"])
    state = MapState(
        tuple(
            SurfaceComponent(
                sid,
                attrs[sid]["genus"],
                tuple(circuits[sid]),
                attrs[sid]["direction"],
                attrs[sid]["parent"],
            )
            for sid in order
        )
    )
    problems = validate(state)
    if problems:
        raise ParseError(str(problems[0]))
    return state


def format_state(state: MapState) -> str:
    lines = [STATE_HEADER]
    for s in state.surfaces:
        lines.append(
            f"surface {s.id} genus={s.genus} direction={s.direction.value} "
            f"parent={s.parent if s.parent is not None else 'none'}"
        )
        for c in s.circuits:
            extra = " twisted=1" if c.twisted else ""
            lines.append(f"circuit {s.id} swallowtails={c.swallowtails}{extra}")
    return "\n".join(lines) + "\n"
