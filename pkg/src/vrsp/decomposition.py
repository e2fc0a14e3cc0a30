"""Hypothesis checkers and decomposers for the contraction-based decompositions.

Two shapes of decomposition are supported:

* a two-way split ``V = X ∪ Y`` giving factors ``G/Y`` and ``G/X``
  (the complete-bipartite lemma, theorems 1 and 3);
* a three-way split ``V = X1 ∪ Y ∪ X2`` giving factors ``G/Y`` and
  ``G/X1/X2`` (theorems 2 and 4).

Theorems 1 and 2 are the strict variants of 3 and 4: every label class of
the relevant cuts must be a single arc.

Each decomposer recomposes the factors with :func:`~vrsp.products.vrsp`
and replays the canonical vertex correspondence (``v -> (v, x~)`` for
vertices of the contracted-away side, ``w -> (y~, w)`` for the rest) as an
isomorphism. ``force=True`` runs the pipeline even when the hypotheses
fail and reports ``verified=False`` instead of raising.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Mapping

from .errors import BadPartition, BadSubset, HypothesesFailed, TooLarge, UnknownVertex
from .graph import (
    Cut,
    LabelPair,
    Ladm,
    arc_induced_subgraph,
    component_count,
    cut,
    is_complete_bipartite,
    source_set,
)
from .products import pair_name, split_pair, vrsp
from .transform import IsoWitness, check_mapping, contract, contract_twice, is_isomorphic

DEFAULT_BRUTE_FORCE_BOUND = 16
BOUND_ENV = "VRSP_BRUTE_FORCE_BOUND"


class DisconnectedGraphWarning(UserWarning):
    """The graph has several components; decompositions assume one."""


def _fresh(g: Ladm, base: str, taken=()) -> str:
    name = base
    while name in g or name in taken:
        name += "'"
    return name


def _sides(g: Ladm, xs: Iterable[str]) -> tuple[frozenset[str], frozenset[str]]:
    xs = frozenset(xs)
    for v in xs:
        if v not in g:
            raise UnknownVertex(v)
    if not xs or xs == g.vertex_set:
        raise BadSubset("X must be a nonempty proper subset of the vertices")
    return xs, g.vertex_set - xs


def _warn_if_disconnected(g: Ladm) -> bool:
    connected = component_count(g) == 1
    if not connected:
        warnings.warn(
            "graph is not weakly connected; checking it as a whole "
            "(decompose each component separately instead)",
            DisconnectedGraphWarning,
            stacklevel=3,
        )
    return connected


def class_verdicts(c: Cut, g: Ladm) -> dict[LabelPair, bool]:
    """Does each label class of ``c`` arc-induce a complete bipartite graph?"""
    out = {}
    for label, arcs in c.classes.items():
        b = arc_induced_subgraph(g, arcs)
        v1 = b.vertex_set & c.x_side
        v2 = b.vertex_set & c.y_side
        out[label] = is_complete_bipartite(b, v1, v2)
    return out


def _labels(arcs) -> set[LabelPair]:
    return {a.label for a in arcs}


def _part_of(parts: Mapping[str, frozenset[str]]) -> dict[str, str]:
    return {v: key for key, members in parts.items() for v in members}


def only_sync_direct(g: Ladm, parts: Mapping[str, frozenset[str]]) -> bool:
    """Only-synchronising-arcs condition, evaluated as label disjointness on ``g``.

    ``parts`` maps part names to vertex sets; the part named ``"y"`` is the
    one contracted in the first factor, all others are contracted in the
    second. Arcs joining two parts are cut arcs; their labels must not
    occur on any internal arc, and labels internal to ``y`` must not occur
    inside any other part.
    """
    where = _part_of(parts)
    cut_labels, y_inner, other_inner = set(), set(), set()
    for a in g.arcs:
        pt, ph = where[a.tail], where[a.head]
        if pt != ph:
            cut_labels.add(a.label)
        elif pt == "y":
            y_inner.add(a.label)
        else:
            other_inner.add(a.label)
    return not (cut_labels & (y_inner | other_inner)) and not (y_inner & other_inner)


def only_sync_contracted(g: Ladm, parts: Mapping[str, frozenset[str]]) -> bool:
    """Same condition, evaluated on the two contracted factors.

    The first factor keeps every arc not inside ``y``; the second keeps
    every arc not inside one of the other parts. A label is synchronising
    when both factors carry it, and every arc carrying such a label must
    come from a cut arc.
    """
    where = _part_of(parts)
    first = [a for a in g.arcs if not (where[a.tail] == "y" and where[a.head] == "y")]
    second = [
        a for a in g.arcs if not (where[a.tail] == where[a.head] and where[a.tail] != "y")
    ]
    shared = _labels(first) & _labels(second)
    for a in first + second:
        if a.label in shared and where[a.tail] == where[a.head]:
            return False
    return True


@dataclass(frozen=True)
class T3Hypotheses:
    """Verdicts of the two-way split checks for one ``(X, Y)``.

    ``distinct_labels`` is ``None`` for the relaxed check and a verdict for
    the strict one.
    """

    x_side: tuple[str, ...]
    y_side: tuple[str, ...]
    cut: Cut
    class_complete: Mapping[LabelPair, bool]
    bipartite: bool
    source_containment: bool
    no_backward: bool
    only_sync: bool
    only_sync_contracted: bool
    connected: bool
    distinct_labels: bool | None = None

    @property
    def failed(self) -> tuple[str, ...]:
        checks = [
            ("bipartite", self.bipartite),
            ("source_containment", self.source_containment),
            ("no_backward", self.no_backward),
            ("only_sync", self.only_sync),
            ("only_sync_routes_agree", self.only_sync == self.only_sync_contracted),
        ]
        if self.distinct_labels is not None:
            checks.insert(0, ("distinct_labels", self.distinct_labels))
        return tuple(name for name, ok in checks if not ok)

    @property
    def ok(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        d = {
            "x": list(self.x_side),
            "y": list(self.y_side),
            "bipartite": self.bipartite,
            "classes": {str(k): v for k, v in self.class_complete.items()},
            "source_containment": self.source_containment,
            "no_backward": self.no_backward,
            "only_sync": self.only_sync,
            "only_sync_contracted": self.only_sync_contracted,
            "connected": self.connected,
        }
        if self.distinct_labels is not None:
            d["distinct_labels"] = self.distinct_labels
        d["ok"] = self.ok
        d["failed"] = list(self.failed)
        return d


def t3_check(g: Ladm, xs: Iterable[str]) -> T3Hypotheses:
    xs, ys = _sides(g, xs)
    connected = _warn_if_disconnected(g)
    c = cut(g, xs, ys)
    verdicts = class_verdicts(c, g)
    parts = {"x": xs, "y": ys}
    return T3Hypotheses(
        x_side=tuple(sorted(xs)),
        y_side=tuple(sorted(ys)),
        cut=c,
        class_complete=verdicts,
        bipartite=all(verdicts.values()),
        source_containment=set(source_set(g)) <= xs,
        no_backward=not c.backward,
        only_sync=only_sync_direct(g, parts),
        only_sync_contracted=only_sync_contracted(g, parts),
        connected=connected,
    )


def t1_check(g: Ladm, xs: Iterable[str]) -> T3Hypotheses:
    """Strict variant of :func:`t3_check`: every cut arc has its own label."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedGraphWarning)
        h = t3_check(g, xs)
    if not h.connected:
        _warn_if_disconnected(g)
    distinct = all(len(arcs) == 1 for arcs in h.cut.classes.values())
    return replace(h, distinct_labels=distinct)


@dataclass(frozen=True)
class T4Hypotheses:
    x1: tuple[str, ...]
    x2: tuple[str, ...]
    y: tuple[str, ...]
    cut_x1_y: Cut
    cut_y_x2: Cut
    cut_x1_x2: Cut
    classes_x1_y: Mapping[LabelPair, bool]
    classes_y_x2: Mapping[LabelPair, bool]
    bipartite_x1_y: bool
    bipartite_y_x2: bool
    label_disjointness: bool
    source_containment: bool
    no_backward: bool
    only_sync: bool
    only_sync_contracted: bool
    connected: bool
    distinct_labels: bool | None = None

    @property
    def failed(self) -> tuple[str, ...]:
        checks = [
            ("bipartite_x1_y", self.bipartite_x1_y),
            ("bipartite_y_x2", self.bipartite_y_x2),
            ("label_disjointness", self.label_disjointness),
            ("source_containment", self.source_containment),
            ("no_backward", self.no_backward),
            ("only_sync", self.only_sync),
            ("only_sync_routes_agree", self.only_sync == self.only_sync_contracted),
        ]
        if self.distinct_labels is not None:
            checks.insert(0, ("distinct_labels", self.distinct_labels))
        return tuple(name for name, ok in checks if not ok)

    @property
    def ok(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        d = {
            "x1": list(self.x1),
            "x2": list(self.x2),
            "y": list(self.y),
            "bipartite_x1_y": self.bipartite_x1_y,
            "bipartite_y_x2": self.bipartite_y_x2,
            "classes_x1_y": {str(k): v for k, v in self.classes_x1_y.items()},
            "classes_y_x2": {str(k): v for k, v in self.classes_y_x2.items()},
            "label_disjointness": self.label_disjointness,
            "source_containment": self.source_containment,
            "no_backward": self.no_backward,
            "only_sync": self.only_sync,
            "only_sync_contracted": self.only_sync_contracted,
            "connected": self.connected,
        }
        if self.distinct_labels is not None:
            d["distinct_labels"] = self.distinct_labels
        d["ok"] = self.ok
        d["failed"] = list(self.failed)
        return d


def _three_sides(g: Ladm, xs1, xs2):
    xs1, xs2 = frozenset(xs1), frozenset(xs2)
    for v in xs1 | xs2:
        if v not in g:
            raise UnknownVertex(v)
    if not xs1 or not xs2:
        raise BadSubset("X1 and X2 must be nonempty")
    if xs1 & xs2:
        raise BadSubset(f"X1 and X2 overlap on {sorted(xs1 & xs2)}")
    ys = g.vertex_set - xs1 - xs2
    if not ys:
        raise BadSubset("Y = V - (X1 ∪ X2) must be nonempty")
    return xs1, xs2, ys


def t4_check(g: Ladm, xs1: Iterable[str], xs2: Iterable[str]) -> T4Hypotheses:
    xs1, xs2, ys = _three_sides(g, xs1, xs2)
    connected = _warn_if_disconnected(g)
    c1, c2, c3 = cut(g, xs1, ys), cut(g, ys, xs2), cut(g, xs1, xs2)
    v1, v2 = class_verdicts(c1, g), class_verdicts(c2, g)
    cross_keys = {a.key for a in c3.arcs}
    elsewhere = _labels(a for a in g.arcs if a.key not in cross_keys)
    parts = {"x1": xs1, "x2": xs2, "y": ys}
    return T4Hypotheses(
        x1=tuple(sorted(xs1)),
        x2=tuple(sorted(xs2)),
        y=tuple(sorted(ys)),
        cut_x1_y=c1,
        cut_y_x2=c2,
        cut_x1_x2=c3,
        classes_x1_y=v1,
        classes_y_x2=v2,
        bipartite_x1_y=all(v1.values()),
        bipartite_y_x2=all(v2.values()),
        label_disjointness=not (c3.labels & elsewhere),
        source_containment=set(source_set(g)) <= xs1,
        no_backward=not (c1.backward or c2.backward or c3.backward),
        only_sync=only_sync_direct(g, parts),
        only_sync_contracted=only_sync_contracted(g, parts),
        connected=connected,
    )


def t2_check(g: Ladm, xs1: Iterable[str], xs2: Iterable[str]) -> T4Hypotheses:
    """Strict variant of :func:`t4_check`: labels distinct within each of the three cuts."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedGraphWarning)
        h = t4_check(g, xs1, xs2)
    if not h.connected:
        _warn_if_disconnected(g)
    distinct = all(
        len(arcs) == 1
        for c in (h.cut_x1_y, h.cut_y_x2, h.cut_x1_x2)
        for arcs in c.classes.values()
    )
    return replace(h, distinct_labels=distinct)


def lemma1_clauses(b: Ladm, xs: Iterable[str], ys: Iterable[str]) -> dict[str, bool]:
    xs, ys = frozenset(xs), frozenset(ys)
    if not xs or not ys or xs & ys or (xs | ys) != b.vertex_set:
        raise BadPartition("X and Y must be nonempty, disjoint and cover the graph")
    c = cut(b, xs, ys)
    return {
        "complete_bipartite": is_complete_bipartite(b, xs, ys),
        "single_label": len(b.label_set) <= 1,
        "nonempty_cut": len(c) > 0,
        "one_direction": not c.backward or not c.forward,
    }


def lemma1_check(b: Ladm, xs: Iterable[str], ys: Iterable[str]) -> bool:
    return all(lemma1_clauses(b, xs, ys).values())


@dataclass(frozen=True)
class DecompositionCertificate:
    """Outcome of one decomposition.

    ``factors`` is ``(G/Y, G/X)`` or ``(G/Y, G/X1/X2)``; ``recomposed`` is
    their VRSP; ``phi`` is the canonical correspondence; ``verified`` is
    the result of replaying ``phi`` as an isomorphism.
    """

    theorem: str
    original: Ladm
    partition: Mapping[str, tuple[str, ...]]
    contracted_names: Mapping[str, str]
    factors: tuple[Ladm, Ladm]
    recomposed: Ladm
    phi: IsoWitness
    verified: bool
    failed: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "partition": {k: list(v) for k, v in self.partition.items()},
            "contracted_names": dict(self.contracted_names),
            "factor_sizes": [[len(f.vertices), len(f.arcs)] for f in self.factors],
            "recomposed_size": [len(self.recomposed.vertices), len(self.recomposed.arcs)],
            "phi": dict(self.phi.mapping),
            "failed_hypotheses": list(self.failed),
            "verified": self.verified,
        }


def _two_way(theorem, g, xs, ys, failed, force):
    if failed and not force:
        raise HypothesesFailed(theorem, failed)
    xt = _fresh(g, "x~")
    yt = _fresh(g, "y~", taken={xt})
    g_y = contract(g, ys, yt).graph
    g_x = contract(g, xs, xt).graph
    recomposed = vrsp(g_y, g_x)
    phi = {v: pair_name(v, xt) for v in xs}
    phi.update({w: pair_name(yt, w) for w in ys})
    phi = IsoWitness(dict(sorted(phi.items())))
    return DecompositionCertificate(
        theorem=theorem,
        original=g,
        partition={"x": tuple(sorted(xs)), "y": tuple(sorted(ys))},
        contracted_names={"x": xt, "y": yt},
        factors=(g_y, g_x),
        recomposed=recomposed,
        phi=phi,
        verified=check_mapping(g, recomposed, phi.mapping),
        failed=tuple(failed),
    )


def lemma1_decompose(b: Ladm, xs: Iterable[str], ys: Iterable[str], *, force: bool = False):
    xs, ys = frozenset(xs), frozenset(ys)
    clauses = lemma1_clauses(b, xs, ys)
    failed = [k for k, ok in clauses.items() if not ok]
    return _two_way("lemma1", b, xs, ys, failed, force)


def t3_decompose(g: Ladm, xs: Iterable[str], *, force: bool = False) -> DecompositionCertificate:
    h = t3_check(g, xs)
    return _two_way("theorem3", g, frozenset(h.x_side), frozenset(h.y_side), h.failed, force)


def t1_decompose(g: Ladm, xs: Iterable[str], *, force: bool = False) -> DecompositionCertificate:
    h = t1_check(g, xs)
    return _two_way("theorem1", g, frozenset(h.x_side), frozenset(h.y_side), h.failed, force)


def _three_way(theorem, g, h: T4Hypotheses, force):
    if h.failed and not force:
        raise HypothesesFailed(theorem, h.failed)
    x1t = _fresh(g, "x1~")
    x2t = _fresh(g, "x2~", taken={x1t})
    yt = _fresh(g, "y~", taken={x1t, x2t})
    g_y = contract(g, h.y, yt).graph
    g_x = contract_twice(g, h.x1, h.x2, (x1t, x2t))
    recomposed = vrsp(g_y, g_x)
    phi = {u: pair_name(u, x1t) for u in h.x1}
    phi.update({v: pair_name(v, x2t) for v in h.x2})
    phi.update({w: pair_name(yt, w) for w in h.y})
    phi = IsoWitness(dict(sorted(phi.items())))
    return DecompositionCertificate(
        theorem=theorem,
        original=g,
        partition={"x1": h.x1, "x2": h.x2, "y": h.y},
        contracted_names={"x1": x1t, "x2": x2t, "y": yt},
        factors=(g_y, g_x),
        recomposed=recomposed,
        phi=phi,
        verified=check_mapping(g, recomposed, phi.mapping),
        failed=tuple(h.failed),
    )


def t4_decompose(g: Ladm, xs1, xs2, *, force: bool = False) -> DecompositionCertificate:
    return _three_way("theorem4", g, t4_check(g, xs1, xs2), force)


def t2_decompose(g: Ladm, xs1, xs2, *, force: bool = False) -> DecompositionCertificate:
    return _three_way("theorem2", g, t2_check(g, xs1, xs2), force)


@dataclass(frozen=True)
class Recomposition:
    """Result of recomposing two factors and comparing with an original graph.

    ``method`` is ``"canonical"`` when the correspondence read off the
    product vertex names worked, ``"search"`` when the general search was
    needed, and ``None`` when the graphs are not isomorphic.
    """

    recomposed: Ladm
    witness: IsoWitness | None
    method: str | None

    @property
    def isomorphic(self) -> bool:
        return self.witness is not None


def _canonical_guess(original: Ladm, recomposed: Ladm) -> dict[str, str] | None:
    guess = {}
    for r in recomposed.vertices:
        try:
            left, right = split_pair(r)
        except ValueError:
            return None
        l_in, r_in = left in original, right in original
        if l_in == r_in:
            return None
        v = left if l_in else right
        if v in guess:
            return None
        guess[v] = r
    return guess


def recompose_and_verify(original: Ladm, factor_a: Ladm, factor_b: Ladm) -> Recomposition:
    """VRSP the two factors and test the result for isomorphism with ``original``.

    The canonical correspondence is tried first; the general search runs
    only if that fails.
    """
    recomposed = vrsp(factor_a, factor_b)
    guess = _canonical_guess(original, recomposed)
    if guess is not None and check_mapping(original, recomposed, guess):
        return Recomposition(recomposed, IsoWitness(dict(sorted(guess.items()))), "canonical")
    witness = is_isomorphic(original, recomposed)
    return Recomposition(recomposed, witness, "search" if witness else None)


def brute_force_bound() -> int:
    raw = os.environ.get(BOUND_ENV)
    return int(raw) if raw else DEFAULT_BRUTE_FORCE_BOUND


def _subsets(pool, min_size=1, max_size=None):
    pool = sorted(pool)
    top = len(pool) if max_size is None else max_size
    for k in range(min_size, top + 1):
        yield from (frozenset(c) for c in combinations(pool, k))


def _closed_upward(g: Ladm, xs) -> bool:
    """No arc enters ``xs`` from outside."""
    return all(a.tail in xs for v in xs for a in g.in_arcs(v))


def _closed_downward(g: Ladm, xs) -> bool:
    """No arc leaves ``xs``."""
    return all(a.head in xs for v in xs for a in g.out_arcs(v))


def find_partitions(g: Ladm, theorem: int, limit: int = 10, *, bound: int | None = None):
    """Enumerate partitions that pass the checker of ``theorem``.

    Theorems 1 and 3 yield ``(X, Y)`` pairs, theorems 2 and 4 yield
    ``(X1, X2, Y)`` triples, each side a sorted tuple. Candidates come in
    size-then-lexicographic order; at most ``limit`` are returned.
    """
    bound = brute_force_bound() if bound is None else bound
    n = len(g.vertices)
    if n > bound:
        raise TooLarge(n, bound)
    if theorem not in (1, 2, 3, 4):
        raise ValueError(f"theorem must be 1, 2, 3 or 4, not {theorem!r}")
    sources = frozenset(source_set(g))
    found = []
    if limit <= 0 or n < 2:
        return found
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedGraphWarning)
        # the prefilters are necessary conditions (sources inside X, no backward arcs)
        for xs in _subsets(g.vertices, 1, n - 1):
            if not sources <= xs or not _closed_upward(g, xs):
                continue
            if theorem in (1, 3):
                check = t1_check if theorem == 1 else t3_check
                if check(g, xs).ok:
                    found.append((tuple(sorted(xs)), tuple(sorted(g.vertex_set - xs))))
                    if len(found) >= limit:
                        return found
                continue
            rest = g.vertex_set - xs
            check = t2_check if theorem == 2 else t4_check
            for xs2 in _subsets(rest, 1, len(rest) - 1):
                if not _closed_downward(g, xs2):
                    continue
                if check(g, xs, xs2).ok:
                    ys = rest - xs2
                    found.append((tuple(sorted(xs)), tuple(sorted(xs2)), tuple(sorted(ys))))
                    if len(found) >= limit:
                        return found
    return found
