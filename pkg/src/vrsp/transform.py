"""Contraction of vertex sets and label-preserving isomorphism."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BadSubset, CycleCreated, CycleDetected, NameClash, UnknownVertex
from .graph import Ladm, LabelPair, levels


@dataclass(frozen=True)
class ContractionResult:
    graph: Ladm
    new_vertex: str
    origin: frozenset[str]


def contract(g: Ladm, xs: Iterable[str], name: str) -> ContractionResult:
    """Replace ``xs`` by the single vertex ``name``.

    Arcs inside ``xs`` are dropped; boundary arcs are redirected to the
    new vertex with their labels; coincident results collapse.
    """
    xs = frozenset(xs)
    for v in xs:
        if v not in g:
            raise UnknownVertex(v)
    if not xs or xs == g.vertex_set:
        raise BadSubset("the contracted set must be a nonempty proper subset of the vertices")
    if name in g:
        raise NameClash(f"vertex name {name!r} already exists")

    def image(v):
        return name if v in xs else v

    rest = [v for v in g.vertices if v not in xs]
    arcs = [
        (image(a.tail), image(a.head), a.label)
        for a in g.arcs
        if not (a.tail in xs and a.head in xs)
    ]
    try:
        graph = Ladm(rest + [name], arcs)
    except CycleDetected as exc:
        raise CycleCreated(f"contracting {sorted(xs)} creates a cycle through {list(exc.vertices)}") from None
    return ContractionResult(graph, name, xs)


def contract_twice(
    g: Ladm,
    xs1: Iterable[str],
    xs2: Iterable[str],
    names: tuple[str, str] = ("x1~", "x2~"),
) -> Ladm:
    """``g / xs1 / xs2`` for disjoint ``xs1`` and ``xs2``."""
    xs1, xs2 = frozenset(xs1), frozenset(xs2)
    if xs1 & xs2:
        raise BadSubset(f"contracted sets overlap on {sorted(xs1 & xs2)}")
    if names[0] == names[1]:
        raise NameClash("the two contracted vertices need distinct names")
    first = contract(g, xs1, names[0]).graph
    return contract(first, xs2, names[1]).graph


@dataclass(frozen=True)
class IsoWitness:
    mapping: Mapping[str, str]

    def inverse(self) -> "IsoWitness":
        return IsoWitness({w: v for v, w in self.mapping.items()})


def _pair_labels(g: Ladm) -> dict[tuple[str, str], frozenset[LabelPair]]:
    acc: dict[tuple[str, str], set] = defaultdict(set)
    for a in g.arcs:
        acc[a.tail, a.head].add(a.label)
    return {k: frozenset(v) for k, v in acc.items()}


def check_mapping(g: Ladm, h: Ladm, mapping: Mapping[str, str]) -> bool:
    """Replay ``mapping`` as an isomorphism from ``g`` to ``h``."""
    if set(mapping) != g.vertex_set:
        return False
    image = set(mapping.values())
    if len(image) != len(mapping) or image != h.vertex_set:
        return False
    if len(g.arcs) != len(h.arcs):
        return False
    forward = {(mapping[t], mapping[hd], lab) for t, hd, lab in g.triples}
    return forward == h.triples


def _initial_keys(g: Ladm):
    lv = levels(g).level
    return {
        v: (
            lv[v],
            len(g.in_arcs(v)),
            len(g.out_arcs(v)),
            tuple(sorted(a.label for a in g.in_arcs(v))),
            tuple(sorted(a.label for a in g.out_arcs(v))),
        )
        for v in g.vertices
    }


def _reindex(keys_g, keys_h):
    palette = {k: i for i, k in enumerate(sorted(set(keys_g.values()) | set(keys_h.values())))}
    return {v: palette[k] for v, k in keys_g.items()}, {v: palette[k] for v, k in keys_h.items()}


def _refine(g: Ladm, h: Ladm):
    """Joint colour refinement; returns ``None`` as soon as the histograms differ."""
    cg, ch = _reindex(_initial_keys(g), _initial_keys(h))
    while True:
        if Counter(cg.values()) != Counter(ch.values()):
            return None
        n_colors = len(set(cg.values()))

        def step(graph, col):
            return {
                v: (
                    col[v],
                    tuple(sorted((a.label, col[a.tail]) for a in graph.in_arcs(v))),
                    tuple(sorted((a.label, col[a.head]) for a in graph.out_arcs(v))),
                )
                for v in graph.vertices
            }

        ng, nh = _reindex(step(g, cg), step(h, ch))
        if len(set(ng.values())) == n_colors:
            if Counter(ng.values()) != Counter(nh.values()):
                return None
            return ng, nh
        cg, ch = ng, nh


def is_isomorphic(g: Ladm, h: Ladm) -> IsoWitness | None:
    """Search for a label-preserving isomorphism from ``g`` to ``h``.

    Vertices are partitioned by colour refinement (level, degrees and the
    labels on incident arcs, iterated over neighbours); the search then
    backtracks inside colour classes, smallest class first, and returns
    the first complete mapping found.
    """
    if len(g.vertices) != len(h.vertices) or len(g.arcs) != len(h.arcs):
        return None
    if Counter(a.label for a in g.arcs) != Counter(a.label for a in h.arcs):
        return None
    refined = _refine(g, h)
    if refined is None:
        return None
    cg, ch = refined
    cells: dict[int, list[str]] = defaultdict(list)
    for w in h.vertices:
        cells[ch[w]].append(w)
    lv = levels(g).level
    order = sorted(g.vertices, key=lambda v: (len(cells[cg[v]]), lv[v], cg[v], v))
    pg, ph = _pair_labels(g), _pair_labels(h)
    empty: frozenset = frozenset()

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def fits(v, w):
        for u, x in mapping.items():
            if pg.get((v, u), empty) != ph.get((w, x), empty):
                return False
            if pg.get((u, v), empty) != ph.get((x, w), empty):
                return False
        return True

    # explicit stack: graphs deeper than the recursion limit are in scope
    stack = [iter(cells[cg[order[0]]])] if order else []
    while stack:
        depth = len(stack) - 1
        v = order[depth]
        if v in mapping:
            used.discard(mapping.pop(v))
        for w in stack[-1]:
            if w not in used and fits(v, w):
                mapping[v] = w
                used.add(w)
                break
        else:
            stack.pop()
            continue
        if len(mapping) == len(order):
            return IsoWitness(dict(sorted(mapping.items())))
        stack.append(iter(cells[cg[order[depth + 1]]]))
    if not order:
        return IsoWitness({})
    return None
