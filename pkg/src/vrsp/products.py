"""Cartesian, intermediate and vertex-removing synchronised products.

Product vertices are named ``"(left,right)"``. Nested products nest the
parentheses, and :func:`split_pair` recovers the two coordinates by
locating the top-level comma.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from itertools import product as _cross
from typing import Literal

from .errors import GraphError
from .graph import Arc, Ladm, levels


def pair_name(left: str, right: str) -> str:
    return f"({left},{right})"


def split_pair(name: str) -> tuple[str, str]:
    """Inverse of :func:`pair_name`.

    >>> split_pair("((u,x~),y~)")
    ('(u,x~)', 'y~')
    """
    if not (name.startswith("(") and name.endswith(")")):
        raise ValueError(f"{name!r} is not a product vertex name")
    depth = 0
    body = name[1:-1]
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1 :]
    raise ValueError(f"{name!r} has no top-level comma")


class ArcKind(enum.Enum):
    TYPE_I = "type_i"
    TYPE_J = "type_j"
    SYNCHRONOUS = "synchronous"


def arc_kind(arc: Arc) -> ArcKind:
    """Classify a product arc by which coordinates it moves."""
    (ti, tj), (hi, hj) = split_pair(arc.tail), split_pair(arc.head)
    if ti != hi and tj != hj:
        return ArcKind.SYNCHRONOUS
    return ArcKind.TYPE_I if ti != hi else ArcKind.TYPE_J


def _names(gi: Ladm, gj: Ladm) -> dict[tuple[str, str], str]:
    names = {(vi, vj): pair_name(vi, vj) for vi, vj in _cross(gi.vertices, gj.vertices)}
    if len(set(names.values())) != len(names):
        raise GraphError("vertex names are ambiguous inside product names; avoid ',' and parentheses")
    return names


def cartesian_product(gi: Ladm, gj: Ladm) -> Ladm:
    names = _names(gi, gj)
    arcs = []
    for a in gi.arcs:
        for vj in gj.vertices:
            arcs.append((names[a.tail, vj], names[a.head, vj], a.label))
    for a in gj.arcs:
        for vi in gi.vertices:
            arcs.append((names[vi, a.tail], names[vi, a.head], a.label))
    return Ladm(names.values(), arcs)


def intermediate_product(gi: Ladm, gj: Ladm) -> Ladm:
    names = _names(gi, gj)
    li, lj = set(gi.label_set), set(gj.label_set)
    arcs = []
    for a in gi.arcs:
        if a.label not in lj:
            for vj in gj.vertices:
                arcs.append((names[a.tail, vj], names[a.head, vj], a.label))
    for a in gj.arcs:
        if a.label not in li:
            for vi in gi.vertices:
                arcs.append((names[vi, a.tail], names[vi, a.head], a.label))
    by_label = defaultdict(list)
    for a in gj.arcs:
        by_label[a.label].append(a)
    for ai in gi.arcs:
        for aj in by_label.get(ai.label, ()):
            arcs.append((names[ai.tail, aj.tail], names[ai.head, aj.head], ai.label))
    return Ladm(names.values(), arcs)


RemovalOrder = Literal["batch", "ascending", "descending"]


@dataclass(frozen=True)
class ProductComputation:
    """All stages of one VRSP computation.

    ``removal_rounds`` lists the vertices deleted in each round, in order.
    """

    cartesian: Ladm
    intermediate: Ladm
    result: Ladm
    removal_rounds: tuple[tuple[str, ...], ...]


def _prune(g: Ladm, box_level: dict[str, int], order: RemovalOrder):
    indeg = {v: len(g.in_arcs(v)) for v in g.vertices}
    alive = set(g.vertices)
    candidates = {v for v in alive if indeg[v] == 0 and box_level[v] > 0}
    rounds = []
    while candidates:
        if order == "batch":
            batch = sorted(candidates)
        elif order == "ascending":
            batch = [min(candidates)]
        elif order == "descending":
            batch = [max(candidates)]
        else:
            raise ValueError(f"unknown removal order {order!r}")
        candidates.difference_update(batch)
        for v in batch:
            alive.discard(v)
            for a in g.out_arcs(v):
                indeg[a.head] -= 1
                if indeg[a.head] == 0 and box_level[a.head] > 0:
                    candidates.add(a.head)
        rounds.append(tuple(batch))
    kept = Ladm(alive, (a for a in g.arcs if a.tail in alive and a.head in alive))
    return kept, tuple(rounds)


def vrsp_stages(gi: Ladm, gj: Ladm, *, order: RemovalOrder = "batch") -> ProductComputation:
    box = cartesian_product(gi, gj)
    mid = intermediate_product(gi, gj)
    # the removal rule refers to levels in the full Cartesian product, never the shrinking graph
    box_level = levels(box).level
    result, rounds = _prune(mid, box_level, order)
    return ProductComputation(box, mid, result, rounds)


def vrsp(gi: Ladm, gj: Ladm, *, order: RemovalOrder = "batch") -> Ladm:
    """Vertex-removing synchronised product of ``gi`` and ``gj``.

    Starting from the intermediate product, every vertex that has
    in-degree 0 there but a positive level in the Cartesian product is
    deleted with its out-arcs, and this repeats until no such vertex is
    left. ``order`` selects whether each round removes all qualifying
    vertices at once or one vertex at a time (smallest or largest name
    first); the fixpoint is the same.
    """
    return vrsp_stages(gi, gj, order=order).result


def swap_coordinates(g: Ladm) -> Ladm:
    """Rename every product vertex ``(a,b)`` to ``(b,a)``."""
    rename = {v: pair_name(*reversed(split_pair(v))) for v in g.vertices}
    return Ladm(rename.values(), ((rename[a.tail], rename[a.head], a.label) for a in g.arcs))
