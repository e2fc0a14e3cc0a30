"""Labelled acyclic directed multigraphs and their structural queries.

A graph carries a vertex set, a set of arcs and, for every arc, a label
pair ``(action, weight)``. Two arcs may join the same ordered pair of
vertices only when their labels differ; identical ``(tail, head, label)``
triples collapse into one arc on construction.

Graph values are immutable. Every query is a pure function and every
set-valued answer comes back as a sorted tuple so that output is
reproducible.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import (
    BadPartition,
    CycleDetected,
    DanglingEnd,
    EmptyAction,
    EmptySide,
    GraphError,
    OverlappingSets,
    UnknownArc,
    UnknownVertex,
)

_DECIMAL = re.compile(r"^(\d+)(?:\.(\d+))?$")
_RATIO = re.compile(r"^(\d+)/(\d+)$")

WeightLike = Union[int, str, Fraction]


def parse_weight(value: WeightLike) -> Fraction:
    """Convert ``value`` to an exact nonnegative rational.

    Strings must be plain decimals (``"2"``, ``"0.5"``) or ratios
    (``"1/3"``). Floats, signs and scientific notation are rejected since
    they cannot round-trip exactly.
    """
    if isinstance(value, bool):
        raise GraphError(f"weight must be a number, not {value!r}")
    if isinstance(value, Fraction):
        w = value
    elif isinstance(value, int):
        w = Fraction(value)
    elif isinstance(value, str):
        text = value.strip()
        if m := _DECIMAL.match(text):
            w = Fraction(text)
        elif m := _RATIO.match(text):
            if int(m.group(2)) == 0:
                raise GraphError(f"weight {value!r} has a zero denominator")
            w = Fraction(int(m.group(1)), int(m.group(2)))
        else:
            raise GraphError(f"weight {value!r} is not a plain decimal or ratio")
    else:
        raise GraphError(f"unsupported weight type {type(value).__name__}")
    if w < 0:
        raise GraphError(f"weight {value!r} is negative")
    return w


def format_weight(w: Fraction) -> str:
    """Shortest exact decimal for ``w``; ``"p/q"`` when no finite decimal exists."""
    if w.denominator == 1:
        return str(w.numerator)
    d = w.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{w.numerator}/{w.denominator}"
    digits = max(twos, fives)
    scaled = w * 10**digits
    whole, frac = divmod(scaled.numerator, 10**digits)
    return f"{whole}.{str(frac).rjust(digits, '0').rstrip('0')}"


@dataclass(frozen=True, order=True)
class LabelPair:
    """An action name together with its exact execution-time weight."""

    action: str
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.action, str) or not self.action:
            raise EmptyAction(f"label action must be a nonempty string, got {self.action!r}")
        object.__setattr__(self, "weight", parse_weight(self.weight))

    def __str__(self):
        return f"{self.action}/{format_weight(self.weight)}"


def as_label(value) -> LabelPair:
    """Accept a LabelPair, an ``(action, weight)`` pair, or a bare action (weight 1)."""
    if isinstance(value, LabelPair):
        return value
    if isinstance(value, str):
        return LabelPair(value)
    action, weight = value
    return LabelPair(action, weight)


@dataclass(frozen=True)
class Arc:
    id: str
    tail: str
    head: str
    label: LabelPair

    @property
    def key(self) -> tuple[str, str, LabelPair]:
        return (self.tail, self.head, self.label)

    def sort_key(self):
        return (self.tail, self.head, self.label, self.id)


ArcSpec = Union[Arc, tuple]


class Ladm:
    """A labelled acyclic directed multigraph.

    Prefer :func:`build_graph` for construction. Equality is structural:
    two graphs are equal when they have the same vertex names and the
    same ``(tail, head, label)`` triples; arc ids are not compared.

    ``dedup_count`` records how many input arcs were dropped because an
    identical triple was already present.
    """

    def __init__(self, vertices: Iterable[str] = (), arcs: Iterable[ArcSpec] = ()):
        vs = []
        seen_v = set()
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex names must be nonempty strings, got {v!r}")
            if v not in seen_v:
                seen_v.add(v)
                vs.append(v)

        kept: dict[tuple, Arc | None] = {}
        pending: list[tuple] = []
        ids: set[str] = set()
        collapsed = 0
        for spec in arcs:
            if isinstance(spec, Arc):
                arc_id, tail, head, label = spec.id, spec.tail, spec.head, spec.label
            else:
                tail, head, label = spec
                arc_id = None
            label = as_label(label)
            for end in (tail, head):
                if end not in seen_v:
                    raise DanglingEnd(arc_id or (tail, head, str(label)), end)
            key = (tail, head, label)
            if key in kept:
                collapsed += 1
                continue
            if arc_id is not None:
                if arc_id in ids:
                    raise GraphError(f"duplicate arc id {arc_id!r}")
                ids.add(arc_id)
                kept[key] = Arc(arc_id, tail, head, label)
            else:
                kept[key] = None
                pending.append(key)

        counter = 0
        for key in sorted(pending):
            while f"a{counter}" in ids:
                counter += 1
            kept[key] = Arc(f"a{counter}", *key)
            ids.add(f"a{counter}")
            counter += 1

        self._vertices = tuple(sorted(vs))
        self._vertex_set = frozenset(vs)
        self._arcs = tuple(sorted(kept.values(), key=Arc.sort_key))
        self._triples = frozenset(kept)
        self._out: dict[str, list[Arc]] = {v: [] for v in self._vertices}
        self._in: dict[str, list[Arc]] = {v: [] for v in self._vertices}
        for a in self._arcs:
            self._out[a.tail].append(a)
            self._in[a.head].append(a)
        self.dedup_count = collapsed
        self._check_acyclic()

    def _check_acyclic(self):
        indeg = {v: len(self._in[v]) for v in self._vertices}
        queue = deque(v for v in self._vertices if indeg[v] == 0)
        done = 0
        while queue:
            v = queue.popleft()
            done += 1
            for a in self._out[v]:
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    queue.append(a.head)
        if done != len(self._vertices):
            raise CycleDetected(v for v, d in indeg.items() if d > 0)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def vertex_set(self) -> frozenset[str]:
        return self._vertex_set

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return self._arcs

    @property
    def triples(self) -> frozenset[tuple[str, str, LabelPair]]:
        return self._triples

    @cached_property
    def label_set(self) -> tuple[LabelPair, ...]:
        return tuple(sorted({a.label for a in self._arcs}))

    @cached_property
    def arc_by_id(self) -> Mapping[str, Arc]:
        return {a.id: a for a in self._arcs}

    def out_arcs(self, v: str) -> tuple[Arc, ...]:
        self._require(v)
        return tuple(self._out[v])

    def in_arcs(self, v: str) -> tuple[Arc, ...]:
        self._require(v)
        return tuple(self._in[v])

    def _require(self, v):
        if v not in self._vertex_set:
            raise UnknownVertex(v)

    def __contains__(self, v):
        return v in self._vertex_set

    def __eq__(self, other):
        if not isinstance(other, Ladm):
            return NotImplemented
        return self._vertex_set == other._vertex_set and self._triples == other._triples

    def __hash__(self):
        return hash((self._vertex_set, self._triples))

    def __repr__(self):
        return f"Ladm(|V|={len(self._vertices)}, |A|={len(self._arcs)})"


def build_graph(vertices: Iterable[str], arcs: Iterable[ArcSpec]) -> Ladm:
    """Validate raw input and return a graph.

    ``arcs`` items are :class:`Arc` objects or ``(tail, head, label)``
    tuples, where ``label`` is a :class:`LabelPair`, an
    ``(action, weight)`` pair or a bare action string.

    >>> g = build_graph(["u", "v"], [("u", "v", ("a", 1)), ("u", "v", ("a", 1))])
    >>> len(g.arcs), g.dedup_count
    (1, 1)
    """
    return Ladm(vertices, arcs)


def in_degree(g: Ladm, v: str) -> int:
    return len(g.in_arcs(v))


def out_degree(g: Ladm, v: str) -> int:
    return len(g.out_arcs(v))


def source_set(g: Ladm) -> tuple[str, ...]:
    return tuple(v for v in g.vertices if not g.in_arcs(v))


def sink_set(g: Ladm) -> tuple[str, ...]:
    return tuple(v for v in g.vertices if not g.out_arcs(v))


@dataclass(frozen=True)
class LevelAssignment:
    """``level[v] == j`` iff ``v`` is removed in round ``j`` of in-degree-0 peeling.

    ``max_level`` is -1 for the empty graph.
    """

    level: Mapping[str, int]
    max_level: int

    def stratum(self, j: int) -> tuple[str, ...]:
        return tuple(sorted(v for v, lv in self.level.items() if lv == j))


def levels(g: Ladm) -> LevelAssignment:
    indeg = {v: in_degree(g, v) for v in g.vertices}
    frontier = [v for v in g.vertices if indeg[v] == 0]
    level: dict[str, int] = {}
    j = -1
    while frontier:
        j += 1
        nxt = []
        for v in frontier:
            level[v] = j
            for a in g.out_arcs(v):
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    nxt.append(a.head)
        frontier = nxt
    return LevelAssignment(dict(sorted(level.items())), j)


def weakly_connected_components(g: Ladm) -> list[Ladm]:
    """Maximal weakly connected subgraphs, ordered by their least vertex name."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in g.arcs:
        ra, rb = find(a.tail), find(a.head)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    return [induced_subgraph(g, members) for _, members in sorted(groups.items())]


def component_count(g: Ladm) -> int:
    return len(weakly_connected_components(g))


def induced_subgraph(g: Ladm, xs: Iterable[str]) -> Ladm:
    xs = set(xs)
    for v in xs:
        g._require(v)
    return Ladm(xs, (a for a in g.arcs if a.tail in xs and a.head in xs))


def arc_induced_subgraph(g: Ladm, arc_set: Iterable[Arc | str]) -> Ladm:
    """Graph made of ``arc_set`` and exactly the ends of those arcs.

    Arcs may be given as :class:`Arc` objects or by id.
    """
    chosen = []
    for item in arc_set:
        if isinstance(item, Arc):
            if item.key not in g.triples:
                raise UnknownArc(item)
            chosen.append(item)
        else:
            try:
                chosen.append(g.arc_by_id[item])
            except KeyError:
                raise UnknownArc(item) from None
    ends = {a.tail for a in chosen} | {a.head for a in chosen}
    return Ladm(ends, chosen)


@dataclass(frozen=True)
class Cut:
    """The arcs ``[X, Y]`` with one end on each side.

    ``classes`` groups the cut arcs by label pair, in label order.
    """

    x_side: frozenset[str]
    y_side: frozenset[str]
    forward: tuple[Arc, ...]
    backward: tuple[Arc, ...]
    classes: Mapping[LabelPair, tuple[Arc, ...]] = field(default_factory=dict)

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(sorted(self.forward + self.backward, key=Arc.sort_key))

    @property
    def labels(self) -> frozenset[LabelPair]:
        return frozenset(self.classes)

    def __len__(self):
        return len(self.forward) + len(self.backward)


def cut(g: Ladm, xs: Iterable[str], ys: Iterable[str]) -> Cut:
    xs, ys = frozenset(xs), frozenset(ys)
    if not xs or not ys:
        raise EmptySide("both sides of a cut must be nonempty")
    if xs & ys:
        raise OverlappingSets(f"cut sides share vertices {sorted(xs & ys)}")
    for v in xs | ys:
        g._require(v)
    forward, backward = [], []
    classes: dict[LabelPair, list[Arc]] = {}
    for a in g.arcs:
        if a.tail in xs and a.head in ys:
            forward.append(a)
        elif a.tail in ys and a.head in xs:
            backward.append(a)
        else:
            continue
        classes.setdefault(a.label, []).append(a)
    return Cut(
        xs,
        ys,
        tuple(forward),
        tuple(backward),
        {lab: tuple(arcs) for lab, arcs in sorted(classes.items())},
    )


def is_complete_bipartite(b: Ladm, v1: Iterable[str], v2: Iterable[str]) -> bool:
    """True iff every arc of ``b`` crosses ``(v1, v2)`` and every cross pair is joined."""
    v1, v2 = frozenset(v1), frozenset(v2)
    if not v1 or not v2 or v1 & v2 or (v1 | v2) != b.vertex_set:
        raise BadPartition("v1 and v2 must be nonempty, disjoint and cover the graph")
    joined = set()
    for a in b.arcs:
        if a.tail in v1 and a.head in v2:
            joined.add((a.tail, a.head))
        elif a.tail in v2 and a.head in v1:
            joined.add((a.head, a.tail))
        else:
            return False
    return len(joined) == len(v1) * len(v2)
