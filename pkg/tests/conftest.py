from __future__ import annotations

from itertools import permutations
from pathlib import Path

import pytest

from vrsp.graph import LabelPair, Ladm, build_graph
from vrsp.generators import SplitMix64
from vrsp.io import parse_graph

FIXTURES = Path(__file__).parent / "fixtures"

FIG4_ARCS = [
    ("u1", "u2", "a"),
    ("u2", "u3", "s"),
    ("u3", "u4", "c"),
    ("u1", "u5", "b"),
    ("u5", "u6", "s"),
    ("u2", "u6", "s"),
    ("u5", "u3", "s"),
    ("u6", "u4", "d"),
]
FIG4_X = ("u1", "u2", "u5")
FIG4_Y = ("u3", "u4", "u6")

FIG2_X = ("u1", "u2")
FIG2_Y = ("v1", "v2", "v3")


@pytest.fixture
def fig4() -> Ladm:
    return build_graph([f"u{i}" for i in range(1, 7)], FIG4_ARCS)


@pytest.fixture
def fig2() -> Ladm:
    return build_graph(FIG2_X + FIG2_Y, [(u, v, "e") for u in FIG2_X for v in FIG2_Y])


@pytest.fixture
def fig3() -> Ladm:
    arcs = [(u, v, "e") for u in FIG2_X for v in FIG2_Y if (u, v) != ("u1", "v1")]
    return build_graph(FIG2_X + FIG2_Y, arcs)


def load(name: str) -> Ladm:
    return parse_graph((FIXTURES / name).read_text())


def brute_force_isomorphic(g: Ladm, h: Ladm) -> bool:
    """Try every bijection V(g) -> V(h)."""
    if len(g.vertices) != len(h.vertices):
        return False
    for perm in permutations(h.vertices):
        phi = dict(zip(g.vertices, perm))
        if {(phi[t], phi[hd], lab) for t, hd, lab in g.triples} == h.triples:
            return True
    return False


def longest_path_levels(g: Ladm) -> dict[str, int]:
    """Level as the length of the longest directed path ending at each vertex."""
    memo: dict[str, int] = {}

    def depth(v):
        if v not in memo:
            preds = [a.tail for a in g.arcs if a.head == v]
            memo[v] = 0 if not preds else 1 + max(depth(p) for p in preds)
        return memo[v]

    return {v: depth(v) for v in g.vertices}


def undirected_bfs_components(g: Ladm) -> list[set[str]]:
    adj = {v: set() for v in g.vertices}
    for a in g.arcs:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen, comps = set(), []
    for v in g.vertices:
        if v in seen:
            continue
        comp, frontier = {v}, [v]
        while frontier:
            w = frontier.pop()
            for n in adj[w] - comp:
                comp.add(n)
                frontier.append(n)
        seen |= comp
        comps.append(comp)
    return comps


def reference_vrsp(gi: Ladm, gj: Ladm) -> tuple[set[tuple], set[tuple]]:
    """Textbook VRSP on coordinate pairs, written independently of the library.

    Returns the surviving vertex pairs and arcs ``((vi, vj), (wi, wj), label)``.
    """
    V = {(a, b) for a in gi.vertices for b in gj.vertices}
    li, lj = {a.label for a in gi.arcs}, {a.label for a in gj.arcs}
    box = set()
    for a in gi.arcs:
        for b in gj.vertices:
            box.add(((a.tail, b), (a.head, b), a.label))
    for a in gj.arcs:
        for b in gi.vertices:
            box.add(((b, a.tail), (b, a.head), a.label))
    mid = {arc for arc in box if (arc[0][1] == arc[1][1] and arc[2] not in lj)
           or (arc[0][0] == arc[1][0] and arc[2] not in li)}
    for ai in gi.arcs:
        for aj in gj.arcs:
            if ai.label == aj.label:
                mid.add(((ai.tail, aj.tail), (ai.head, aj.head), ai.label))

    def level_zero(vs, arcs):
        heads = {h for _, h, _ in arcs}
        return {v for v in vs if v not in heads}

    def box_level_positive():
        # level > 0 in the Cartesian product iff some arc enters the vertex
        return {h for _, h, _ in box}

    positive = box_level_positive()
    alive, arcs = set(V), set(mid)
    while True:
        doomed = level_zero(alive, arcs) & positive
        if not doomed:
            return alive, arcs
        alive -= doomed
        arcs = {a for a in arcs if a[0] in alive}


def renamed(g: Ladm, seed: int) -> tuple[Ladm, dict[str, str]]:
    rng = SplitMix64(seed)
    new = rng.shuffled([f"r{i}" for i in range(len(g.vertices))])
    ren = dict(zip(g.vertices, new))
    arcs = rng.shuffled([(ren[a.tail], ren[a.head], a.label) for a in g.arcs])
    return build_graph(new, arcs), ren


def relabel(g: Ladm, prefix: str) -> Ladm:
    return build_graph(
        g.vertices, [(a.tail, a.head, LabelPair(prefix + a.label.action, a.label.weight)) for a in g.arcs]
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
