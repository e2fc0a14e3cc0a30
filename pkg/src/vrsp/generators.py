"""Seeded random instances for the lemma and the decomposition theorems.

Randomness comes from SplitMix64 so that an instance is a pure function
of ``(seed, config)`` and can be reproduced bit-for-bit elsewhere:

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                (all arithmetic mod 2**64)

``below(n)`` maps an output to ``[0, n)`` as ``(out * n) >> 64``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleBudget
from .graph import Ladm, LabelPair

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next() * n) >> 64

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, items: Sequence):
        return items[self.below(len(items))]

    def shuffled(self, items: Sequence) -> list:
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out

    def sample(self, items: Sequence, k: int) -> list:
        return self.shuffled(items)[:k]


@dataclass(frozen=True)
class GenConfig:
    """Generator knobs.

    ``vertices`` is the exact vertex count, ``arcs`` the number of arcs
    sampled inside the parts (or overall for :func:`gen_ladm`),
    ``classes`` the number of complete-bipartite label classes per cut,
    and ``cross_arcs`` the number of arcs sampled on ``[X1, X2]``.
    """

    seed: int = 0
    vertices: int = 6
    arcs: int = 4
    alphabet: int = 3
    max_m: int = 2
    max_n: int = 2
    classes: int = 1
    cross_arcs: int = 2
    kind: str = "t3"


def _names(n):
    return [f"v{i}" for i in range(n)]


def _label(action):
    return LabelPair(action, 1)


def gen_ladm(cfg: GenConfig) -> Ladm:
    if cfg.vertices < 1 or cfg.alphabet < 1 or cfg.arcs < 0:
        raise InfeasibleBudget("need at least one vertex and one label")
    rng = SplitMix64(cfg.seed)
    order = rng.shuffled(_names(cfg.vertices))
    arcs = []
    if cfg.vertices >= 2:
        for _ in range(cfg.arcs):
            i, j = sorted(rng.sample(range(cfg.vertices), 2))
            arcs.append((order[i], order[j], _label(f"l{rng.below(cfg.alphabet)}")))
    return Ladm(order, arcs)


class _Builder:
    """Accumulates arcs and hands out fresh labels per prefix."""

    def __init__(self, rng: SplitMix64, vertices):
        self.rng = rng
        self.vertices = list(vertices)
        self.arcs: list[tuple] = []
        self._counters: dict[str, int] = {}

    def fresh(self, prefix: str) -> LabelPair:
        k = self._counters.get(prefix, 0)
        self._counters[prefix] = k + 1
        return _label(f"{prefix}{k}")

    def inner(self, part: list[str], count: int, prefix: str, alphabet: int):
        # ranks follow the order of ``part``, so arcs stay acyclic
        if len(part) < 2:
            return
        for _ in range(count):
            i, j = sorted(self.rng.sample(range(len(part)), 2))
            self.arcs.append((part[i], part[j], _label(f"{prefix}{self.rng.below(alphabet)}")))

    def complete_class(self, left: list[str], right: list[str], max_m, max_n, prefix):
        m = self.rng.between(1, min(max_m, len(left)))
        n = self.rng.between(1, min(max_n, len(right)))
        label = self.fresh(prefix)
        heads = self.rng.sample(right, n)
        for u in self.rng.sample(left, m):
            for v in heads:
                self.arcs.append((u, v, label))

    def has_in_arc(self, v):
        return any(h == v for _, h, _ in self.arcs)

    def graph(self) -> Ladm:
        return Ladm(self.vertices, self.arcs)

    def connect_to(self, anchor: str, sources: list[str], prefix: str):
        """Give every component missing ``anchor`` one arc from its ``sources`` member to ``anchor``."""
        source_set = set(sources)
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for t, h, _ in self.arcs:
            parent[find(t)] = find(h)
        members: dict[str, list[str]] = {}
        for v in self.vertices:
            members.setdefault(find(v), []).append(v)
        home = find(anchor)
        for root, vs in sorted(members.items(), key=lambda kv: min(kv[1])):
            if root == home:
                continue
            tails = [v for v in vs if v in source_set]
            self.arcs.append((self.rng.choice(tails), anchor, self.fresh(prefix)))


def _check_common(cfg: GenConfig, minimum: int):
    if cfg.vertices < minimum:
        raise InfeasibleBudget(f"need at least {minimum} vertices, got {cfg.vertices}")
    if cfg.classes < 1:
        raise InfeasibleBudget("at least one cut class is needed for a connected instance")
    if cfg.max_m < 1 or cfg.max_n < 1 or cfg.alphabet < 1 or cfg.arcs < 0:
        raise InfeasibleBudget("class sizes and alphabet must be positive")


def gen_t3_instance(cfg: GenConfig) -> tuple[Ladm, tuple[str, ...]]:
    """A weakly connected graph and a set X for which the theorem-3 check passes.

    G[X] and G[Y] get labels from disjoint alphabets, every cut label
    class is a complete bipartite K_{m,n} with a label of its own, and
    every Y vertex left without an in-arc receives one from X.
    """
    _check_common(cfg, 2)
    rng = SplitMix64(cfg.seed)
    names = rng.shuffled(_names(cfg.vertices))
    nx = rng.between(1, cfg.vertices - 1)
    xs, ys = names[:nx], names[nx:]
    b = _Builder(rng, names)
    for _ in range(cfg.arcs):
        part, prefix = (xs, "p") if rng.below(2) == 0 else (ys, "q")
        b.inner(part, 1, prefix, cfg.alphabet)
    for _ in range(cfg.classes):
        b.complete_class(xs, ys, cfg.max_m, cfg.max_n, "s")
    for v in ys:
        if not b.has_in_arc(v):
            b.arcs.append((rng.choice(xs), v, b.fresh("s")))
    b.connect_to(rng.choice(ys), xs, "s")
    return b.graph(), tuple(sorted(xs))


def gen_t4_instance(cfg: GenConfig) -> tuple[Ladm, tuple[str, ...], tuple[str, ...]]:
    """A weakly connected graph with sets X1, X2 for which the theorem-4 check passes.

    Layers run X1 -> Y -> X2. Cuts [X1,Y] and [Y,X2] carry complete
    bipartite classes with labels of their own; [X1,X2] carries
    ``cross_arcs`` random arcs drawn from a small private label pool, so
    its classes may be incomplete and may repeat labels.
    """
    _check_common(cfg, 3)
    rng = SplitMix64(cfg.seed)
    names = rng.shuffled(_names(cfg.vertices))
    n1 = rng.between(1, cfg.vertices - 2)
    n2 = rng.between(1, cfg.vertices - n1 - 1)
    x1, x2, ys = names[:n1], names[n1 : n1 + n2], names[n1 + n2 :]
    b = _Builder(rng, names)
    for _ in range(cfg.arcs):
        pick = rng.below(3)
        part, prefix = [(x1, "p"), (ys, "q"), (x2, "p")][pick]
        b.inner(part, 1, prefix, cfg.alphabet)
    for _ in range(cfg.classes):
        b.complete_class(x1, ys, cfg.max_m, cfg.max_n, "s")
        b.complete_class(ys, x2, cfg.max_m, cfg.max_n, "t")
    for _ in range(cfg.cross_arcs):
        b.arcs.append((rng.choice(x1), rng.choice(x2), _label(f"w{rng.below(cfg.alphabet)}")))
    for v in ys:
        if not b.has_in_arc(v):
            b.arcs.append((rng.choice(x1), v, b.fresh("s")))
    for v in x2:
        if not b.has_in_arc(v):
            b.arcs.append((rng.choice(ys), v, b.fresh("t")))
    b.connect_to(rng.choice(ys), x1, "s")
    return b.graph(), tuple(sorted(x1)), tuple(sorted(x2))


def complete_bipartite(m: int, n: int, action: str = "s") -> tuple[Ladm, tuple[str, ...], tuple[str, ...]]:
    """K_{m,n} with every arc ``u_i -> v_j`` labelled ``(action, 1)``."""
    if m < 1 or n < 1:
        raise InfeasibleBudget("m and n must be at least 1")
    xs = [f"u{i}" for i in range(1, m + 1)]
    ys = [f"v{j}" for j in range(1, n + 1)]
    label = _label(action)
    g = Ladm(xs + ys, [(u, v, label) for u in xs for v in ys])
    return g, tuple(xs), tuple(ys)


def gen_lemma1_instance(cfg: GenConfig) -> tuple[Ladm, tuple[str, ...], tuple[str, ...]]:
    """K_{m,n} with m, n drawn from ``[1, max_m]`` and ``[1, max_n]``."""
    if cfg.max_m < 1 or cfg.max_n < 1:
        raise InfeasibleBudget("m and n must be at least 1")
    rng = SplitMix64(cfg.seed)
    return complete_bipartite(rng.between(1, cfg.max_m), rng.between(1, cfg.max_n))
