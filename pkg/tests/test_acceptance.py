"""Acceptance suite: one test per criterion, each with a pinned time limit.

Every test prints a PASS/FAIL line, and the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import os
import subprocess
import sys
from collections import Counter
from contextlib import contextmanager
from dataclasses import replace
from time import perf_counter

import pytest

from conftest import ACCEPTANCE_LINES, FIXTURES, brute_force_isomorphic, relabel, renamed
from vrsp.decomposition import (
    lemma1_check,
    lemma1_clauses,
    lemma1_decompose,
    t1_check,
    t3_check,
    t3_decompose,
    t4_check,
    t4_decompose,
)
from vrsp.generators import (
    GenConfig,
    SplitMix64,
    gen_ladm,
    gen_lemma1_instance,
    gen_t3_instance,
    gen_t4_instance,
)
from vrsp.graph import build_graph, is_complete_bipartite
from vrsp.io import emit_graph, parse_graph
from vrsp.products import (
    ArcKind,
    arc_kind,
    cartesian_product,
    intermediate_product,
    swap_coordinates,
    vrsp,
    vrsp_stages,
)
from vrsp.transform import check_mapping, contract, is_isomorphic

pytestmark = pytest.mark.acceptance

# time limits in seconds
LIMITS = {1: 1, 2: 1, 3: 1, 4: 10, 5: 60, 6: 60, 7: 30, 8: 60, 9: 30, 10: 10}


@contextmanager
def criterion(number: int, title: str):
    start = perf_counter()
    try:
        yield
        elapsed = perf_counter() - start
        assert elapsed < LIMITS[number], f"took {elapsed:.2f}s, limit {LIMITS[number]}s"
    except BaseException as exc:
        line = f"FAIL  AC{number:<2} {title}  ({type(exc).__name__}: {exc})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"PASS  AC{number:<2} {title}  ({elapsed:.2f}s / {LIMITS[number]}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


def bipartite_fig2():
    xs, ys = ("u1", "u2"), ("v1", "v2", "v3")
    return build_graph(xs + ys, [(u, v, "e") for u in xs for v in ys]), xs, ys


def test_ac01_k23_pipeline():
    with criterion(1, "K_{2,3} pipeline counts and isomorphism"):
        b, xs, ys = bipartite_fig2()
        assert lemma1_check(b, xs, ys)
        by = contract(b, ys, "y~").graph
        bx = contract(b, xs, "x~").graph
        assert (len(by.vertices), len(by.arcs)) == (3, 2)
        assert (len(bx.vertices), len(bx.arcs)) == (4, 3)
        stages = vrsp_stages(by, bx)
        mid = stages.intermediate
        assert len(mid.vertices) == 12
        assert len(mid.arcs) == 6
        assert all(arc_kind(a) is ArcKind.SYNCHRONOUS for a in mid.arcs)
        assert (len(stages.result.vertices), len(stages.result.arcs)) == (5, 6)
        cert = lemma1_decompose(b, xs, ys)
        assert cert.verified and cert.recomposed == stages.result


def test_ac02_incomplete_k23():
    with criterion(2, "incomplete K_{2,3} fails and does not recompose"):
        b, xs, ys = bipartite_fig2()
        b = build_graph(b.vertices, [a.key for a in b.arcs if (a.tail, a.head) != ("u1", "v1")])
        assert len(b.arcs) == 5
        clauses = lemma1_clauses(b, xs, ys)
        assert not clauses["complete_bipartite"]
        assert [k for k, ok in clauses.items() if not ok] == ["complete_bipartite"]
        cert = lemma1_decompose(b, xs, ys, force=True)
        assert len(cert.recomposed.arcs) == 6
        assert not cert.verified
        assert is_isomorphic(b, cert.recomposed) is None


def test_ac03_six_vertex_example():
    with criterion(3, "six-vertex example under the relaxed and strict checks"):
        g = parse_graph((FIXTURES / "fig4.json").read_text())
        assert (len(g.vertices), len(g.arcs)) == (6, 8)
        xs = ("u1", "u2", "u5")
        h = t3_check(g, xs)
        assert h.bipartite and h.source_containment and h.no_backward and h.only_sync and h.connected
        assert h.ok
        strict = t1_check(g, xs)
        assert strict.failed == ("distinct_labels",)
        cert = t3_decompose(g, xs)
        assert cert.verified
        assert (len(cert.recomposed.vertices), len(cert.recomposed.arcs)) == (6, 8)


def test_ac04_lemma1_suite():
    with criterion(4, "200 complete bipartite instances, m,n <= 5"):
        shapes = Counter()
        for seed in range(200):
            b, xs, ys = gen_lemma1_instance(GenConfig(seed=seed, max_m=5, max_n=5))
            m, n = len(xs), len(ys)
            shapes[m, n] += 1
            cert = lemma1_decompose(b, xs, ys)
            assert cert.verified, seed
            assert len(cert.recomposed.vertices) == m + n, seed
            assert len(cert.recomposed.arcs) == m * n, seed
        assert len(shapes) >= 20


def test_ac05_theorem3_suite():
    with criterion(5, "200 generated two-way instances, |V| <= 12, search-confirmed"):
        for seed in range(200):
            cfg = GenConfig(
                seed=seed,
                vertices=2 + seed % 11,
                arcs=seed % 7,
                alphabet=1 + seed % 3,
                max_m=1 + seed % 3,
                max_n=1 + (seed // 3) % 3,
                classes=1 + seed % 2,
            )
            g, xs = gen_t3_instance(cfg)
            assert len(g.vertices) <= 12
            cert = t3_decompose(g, xs)
            assert cert.verified, seed
            w = is_isomorphic(g, cert.recomposed)
            assert w is not None and check_mapping(g, cert.recomposed, w.mapping), seed


def test_ac06_theorem4_suite():
    with criterion(6, "100 generated three-way instances, |V| <= 12"):
        incomplete = 0
        for seed in range(100):
            cfg = GenConfig(
                seed=seed,
                vertices=3 + seed % 10,
                arcs=seed % 6,
                alphabet=1 + seed % 2,
                max_m=1 + seed % 3,
                max_n=1 + (seed // 3) % 3,
                cross_arcs=seed % 5,
            )
            g, x1, x2 = gen_t4_instance(cfg)
            assert len(g.vertices) <= 12
            h = t4_check(g, x1, x2)
            for label, arcs in h.cut_x1_x2.classes.items():
                b = build_graph({a.tail for a in arcs} | {a.head for a in arcs}, [a.key for a in arcs])
                if not is_complete_bipartite(b, {a.tail for a in arcs}, {a.head for a in arcs}):
                    incomplete += 1
                    break
            cert = t4_decompose(g, x1, x2)
            assert cert.verified, seed
        assert incomplete > 0


def test_ac07_mutation_suite():
    with criterion(7, "deleting one arc of a K_{m,n} class (m,n >= 2) breaks the decomposition"):
        done, seed = 0, 0
        while done < 50:
            seed += 1
            assert seed < 5000, "ran out of seeds"
            cfg = GenConfig(seed=seed, vertices=5 + seed % 8, arcs=seed % 5, max_m=3, max_n=3, classes=1 + seed % 2)
            g, xs = gen_t3_instance(cfg)
            h = t3_check(g, xs)
            assert h.ok
            big = [
                arcs for arcs in h.cut.classes.values()
                if len({a.tail for a in arcs}) >= 2 and len({a.head for a in arcs}) >= 2
            ]
            if not big:
                continue
            arcs = big[0]
            victim = arcs[SplitMix64(seed).below(len(arcs))]
            mutated = build_graph(g.vertices, [a.key for a in g.arcs if a.key != victim.key])
            after = t3_check(mutated, xs)
            assert h.bipartite and not after.bipartite, seed
            cert = t3_decompose(mutated, xs, force=True)
            assert not cert.verified, seed
            done += 1


def test_ac08_isomorphism_oracle():
    with criterion(8, "500 pairs on <= 7 vertices agree with all-permutations search"):
        agree = positives = 0
        for i in range(500):
            cfg = GenConfig(seed=i, vertices=1 + i % 7, arcs=(i * 7) % 11, alphabet=1 + i % 2)
            g = gen_ladm(cfg)
            if i % 2 == 0:
                h, _ = renamed(g, i)
            else:
                h, _ = renamed(gen_ladm(replace(cfg, seed=10_000 + i)), i)
            w = is_isomorphic(g, h)
            truth = brute_force_isomorphic(g, h)
            assert (w is not None) == truth, i
            if w is not None:
                assert check_mapping(g, h, w.mapping), i
                positives += i % 2
            agree += 1
        assert agree == 500
        # some independent pairs should coincide, so both verdicts are exercised
        assert positives > 0


def test_ac09_product_identities():
    with criterion(9, "count formulas, label-disjoint collapse, order and swap invariance"):
        for i in range(200):
            gi = gen_ladm(GenConfig(seed=2 * i, vertices=1 + i % 5, arcs=i % 7, alphabet=1 + i % 3))
            gj = gen_ladm(GenConfig(seed=2 * i + 1, vertices=1 + (i // 5) % 5, arcs=(i // 2) % 7, alphabet=1 + i % 3))
            box = cartesian_product(gi, gj)
            assert len(box.vertices) == len(gi.vertices) * len(gj.vertices)
            assert len(box.arcs) == len(gi.arcs) * len(gj.vertices) + len(gj.arcs) * len(gi.vertices)
            assert box.dedup_count == 0
            mid = intermediate_product(gi, gj)
            ci, cj = Counter(a.label for a in gi.arcs), Counter(a.label for a in gj.arcs)
            sync = sum(1 for a in mid.arcs if arc_kind(a) is ArcKind.SYNCHRONOUS)
            assert sync == sum(ci[lab] * cj[lab] for lab in ci)
            apart = relabel(gj, "z")
            assert vrsp(gi, apart) == cartesian_product(gi, apart)
            res = vrsp(gi, gj)
            assert vrsp(gi, gj, order="ascending") == res == vrsp(gi, gj, order="descending")
            assert swap_coordinates(res) == vrsp(gj, gi)


def _cli(args, env_seed):
    env = {**os.environ, "PYTHONHASHSEED": str(env_seed)}
    proc = subprocess.run([sys.executable, "-m", "vrsp", *map(str, args)], capture_output=True, env=env, check=False)
    return proc.returncode, proc.stdout


def test_ac10_determinism(tmp_path):
    with criterion(10, "CLI output and generator seeds are byte-reproducible"):
        f = FIXTURES
        commands = [
            ["validate", f / "fig4.json"],
            ["levels", f / "fig4.json"],
            ["components", f / "fig4.json"],
            ["product", "--kind", "cartesian", f / "fig3_BY.json", f / "fig3_BX.json"],
            ["product", "--kind", "intermediate", f / "fig3_BY.json", f / "fig3_BX.json"],
            ["product", "--kind", "vrsp", f / "fig3_BY.json", f / "fig3_BX.json", "--dot"],
            ["contract", f / "fig4.json", "--set", "u3,u4,u6", "--name", "y~"],
            ["check", "--theorem", "4", f / "fig4.json", "--x", "u1", "--x2", "u4"],
            ["decompose", "--theorem", "3", f / "fig4.json"],
            ["verify", f / "fig3_B.json", f / "fig3_BY.json", f / "fig3_BX.json"],
            ["gen", "--kind", "t4", "--seed", "11", "--vertices", "10"],
            ["find-partitions", f / "fig4.json", "--theorem", "4", "--limit", "50"],
        ]
        for cmd in commands:
            first, second = _cli(cmd, 1), _cli(cmd, 2)
            assert first[0] in (0, 1), cmd
            assert first == second, cmd
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out, seed in ((out_a, 3), (out_b, 4)):
            _cli(["decompose", "--theorem", "3", f / "fig4.json", "--out-dir", out], seed)
        for name in ("factor_a.json", "factor_b.json", "certificate.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
        for seed in (0, 1, 2**63 + 5):
            cfg = GenConfig(seed=seed, vertices=9)
            assert emit_graph(gen_ladm(cfg)) == emit_graph(gen_ladm(cfg))
            assert emit_graph(gen_t3_instance(cfg)[0]) == emit_graph(gen_t3_instance(cfg)[0])
            assert emit_graph(gen_t4_instance(cfg)[0]) == emit_graph(gen_t4_instance(cfg)[0])
            assert emit_graph(gen_lemma1_instance(cfg)[0]) == emit_graph(gen_lemma1_instance(cfg)[0])
