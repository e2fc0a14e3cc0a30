"""Command-line interface.

Exit codes: 0 success, 1 hypotheses failed or graphs not isomorphic,
2 bad input, 3 brute-force bound exceeded. Results go to stdout as JSON
(graphs as GraphDocuments, or DOT with ``--dot``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import decomposition as dec
from .errors import HypothesesFailed, TooLarge, VrspError
from .generators import (
    GenConfig,
    gen_ladm,
    gen_lemma1_instance,
    gen_t3_instance,
    gen_t4_instance,
)
from .graph import component_count, levels, weakly_connected_components
from .io import document_dict, emit_dot, emit_graph, parse_document
from .products import cartesian_product, intermediate_product, vrsp
from .transform import contract

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _read(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


class _InputError(Exception):
    pass


def _set_arg(raw):
    if raw is None:
        return None
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if not items:
        raise _InputError("vertex list is empty")
    return items


def _graph_text(g, args, partition=None, name="G"):
    return emit_dot(g, name) if getattr(args, "dot", False) else emit_graph(g, partition)


def _write(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    g = _read(args.file).graph
    sys.stdout.write(_dump({
        "valid": True,
        "vertices": len(g.vertices),
        "arcs": len(g.arcs),
        "components": component_count(g),
        "collapsed_duplicates": g.dedup_count,
    }))
    return EXIT_OK


def cmd_levels(args):
    la = levels(_read(args.file).graph)
    sys.stdout.write(_dump({"levels": dict(la.level), "max_level": la.max_level}))
    return EXIT_OK


def cmd_components(args):
    comps = weakly_connected_components(_read(args.file).graph)
    if args.dot:
        sys.stdout.write("".join(emit_dot(c, f"component{i}") for i, c in enumerate(comps)))
    else:
        sys.stdout.write(_dump({"count": len(comps), "components": [document_dict(c) for c in comps]}))
    return EXIT_OK


_PRODUCTS = {"cartesian": cartesian_product, "intermediate": intermediate_product, "vrsp": vrsp}


def cmd_product(args):
    a, b = _read(args.a).graph, _read(args.b).graph
    _write(_graph_text(_PRODUCTS[args.kind](a, b), args), args.output)
    return EXIT_OK


def cmd_contract(args):
    g = _read(args.file).graph
    res = contract(g, _set_arg(args.set), args.name)
    _write(_graph_text(res.graph, args), args.output)
    return EXIT_OK


def _sides(args, doc):
    xs = _set_arg(args.x) or list(doc.partition.get("x1") or doc.partition.get("x") or [])
    xs2 = _set_arg(args.x2) or list(doc.partition.get("x2") or [])
    if not xs:
        raise _InputError("--x is required (or a partition in the input document)")
    if args.theorem in ("2", "4") and not xs2:
        raise _InputError("--x2 is required for theorems 2 and 4")
    return xs, xs2


def _run_check(theorem, g, xs, xs2):
    if theorem == "lemma1":
        clauses = dec.lemma1_clauses(g, xs, g.vertex_set - set(xs))
        failed = [k for k, ok in clauses.items() if not ok]
        return {**clauses, "ok": not failed, "failed": failed}
    check = {"1": dec.t1_check, "3": dec.t3_check}.get(theorem)
    if check:
        return check(g, xs).as_dict()
    check = dec.t2_check if theorem == "2" else dec.t4_check
    return check(g, xs, xs2).as_dict()


def _restrict(g, sets):
    out = [sorted(set(s) & g.vertex_set) for s in sets]
    return out if all(out) else None


def cmd_check(args):
    doc = _read(args.file)
    xs, xs2 = _sides(args, doc)
    if args.per_component:
        results = []
        for comp in weakly_connected_components(doc.graph):
            parts = _restrict(comp, [xs, xs2] if xs2 else [xs])
            if parts is None or (xs2 and not comp.vertex_set - set(parts[0]) - set(parts[1])):
                results.append({"vertices": list(comp.vertices), "ok": False, "failed": ["empty_side"]})
                continue
            r = _run_check(args.theorem, comp, parts[0], parts[1] if xs2 else [])
            results.append({"vertices": list(comp.vertices), **r})
        ok = all(r["ok"] for r in results)
        sys.stdout.write(_dump({"theorem": args.theorem, "components": results, "ok": ok}))
        return EXIT_OK if ok else EXIT_FAILED
    result = _run_check(args.theorem, doc.graph, xs, xs2)
    sys.stdout.write(_dump({"theorem": args.theorem, **result}))
    return EXIT_OK if result["ok"] else EXIT_FAILED


def _decompose(theorem, g, xs, xs2, force):
    if theorem == "lemma1":
        return dec.lemma1_decompose(g, xs, g.vertex_set - set(xs), force=force)
    if theorem in ("1", "3"):
        fn = dec.t1_decompose if theorem == "1" else dec.t3_decompose
        return fn(g, xs, force=force)
    fn = dec.t2_decompose if theorem == "2" else dec.t4_decompose
    return fn(g, xs, xs2, force=force)


def cmd_decompose(args):
    doc = _read(args.file)
    xs, xs2 = _sides(args, doc)
    try:
        cert = _decompose(args.theorem, doc.graph, xs, xs2, args.force)
    except HypothesesFailed as exc:
        sys.stdout.write(_dump({
            "status": "hypotheses_failed",
            "theorem": exc.theorem,
            "failed": list(exc.failed),
        }))
        return EXIT_FAILED
    factor_a, factor_b = cert.factors
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        ext = "dot" if args.dot else "json"
        (out / f"factor_a.{ext}").write_text(_graph_text(factor_a, args, name="factor_a"), encoding="utf-8")
        (out / f"factor_b.{ext}").write_text(_graph_text(factor_b, args, name="factor_b"), encoding="utf-8")
        (out / "certificate.json").write_text(_dump(cert.as_dict()), encoding="utf-8")
        sys.stdout.write(_dump(cert.as_dict()))
    elif args.dot:
        sys.stdout.write(emit_dot(factor_a, "factor_a") + emit_dot(factor_b, "factor_b"))
    else:
        sys.stdout.write(_dump({
            "certificate": cert.as_dict(),
            "factors": [document_dict(factor_a), document_dict(factor_b)],
        }))
    return EXIT_OK if cert.verified else EXIT_FAILED


def cmd_verify(args):
    original = _read(args.original).graph
    fa, fb = _read(args.factor_a).graph, _read(args.factor_b).graph
    res = dec.recompose_and_verify(original, fa, fb)
    body = {
        "isomorphic": res.isomorphic,
        "original_size": [len(original.vertices), len(original.arcs)],
        "recomposed_size": [len(res.recomposed.vertices), len(res.recomposed.arcs)],
    }
    if res.isomorphic:
        body.update(method=res.method, mapping=dict(res.witness.mapping))
    else:
        body["reason"] = "not isomorphic"
    sys.stdout.write(_dump(body))
    return EXIT_OK if res.isomorphic else EXIT_FAILED


def _gen_config(args) -> GenConfig:
    values = {}
    if args.config:
        try:
            values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise _InputError(f"cannot load config {args.config}: {exc}") from None
        if not isinstance(values, dict):
            raise _InputError("config file must hold a JSON object")
        unknown = set(values) - set(GenConfig.__dataclass_fields__)
        if unknown:
            raise _InputError(f"unknown config keys {sorted(unknown)}")
    for key in GenConfig.__dataclass_fields__:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return GenConfig(**values)


def cmd_gen(args):
    cfg = _gen_config(args)
    kind = args.kind or cfg.kind
    if kind == "ladm":
        g, part = gen_ladm(cfg), None
    elif kind == "lemma1":
        g, xs, ys = gen_lemma1_instance(cfg)
        part = {"x": xs, "y": ys}
    elif kind == "t3":
        g, xs = gen_t3_instance(cfg)
        part = {"x": xs, "y": tuple(sorted(g.vertex_set - set(xs)))}
    elif kind == "t4":
        g, x1, x2 = gen_t4_instance(cfg)
        part = {"x1": x1, "x2": x2, "y": tuple(sorted(g.vertex_set - set(x1) - set(x2)))}
    else:
        raise _InputError(f"unknown generator kind {kind!r}")
    _write(_graph_text(g, args, part), args.output)
    return EXIT_OK


def cmd_find_partitions(args):
    g = _read(args.file).graph
    found = dec.find_partitions(g, int(args.theorem), args.limit, bound=args.bound)
    keys = ("x", "y") if args.theorem in ("1", "3") else ("x1", "x2", "y")
    sys.stdout.write(_dump({
        "theorem": args.theorem,
        "partitions": [dict(zip(keys, map(list, p))) for p in found],
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vrsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_out(sp):
        sp.add_argument("-o", "--output", help="write the graph here instead of stdout")
        sp.add_argument("--dot", action="store_true", help="emit DOT instead of a GraphDocument")

    s = sub.add_parser("validate", help="parse and validate a graph document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("levels", help="print the level of every vertex")
    s.add_argument("file")
    s.set_defaults(func=cmd_levels)

    s = sub.add_parser("components", help="split into weakly connected components")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("product", help="Cartesian, intermediate or vertex-removing product")
    s.add_argument("--kind", choices=sorted(_PRODUCTS), default="vrsp")
    s.add_argument("a")
    s.add_argument("b")
    graph_out(s)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("contract", help="contract a vertex set into one vertex")
    s.add_argument("file")
    s.add_argument("--set", required=True, help="comma-separated vertices")
    s.add_argument("--name", default="x~")
    graph_out(s)
    s.set_defaults(func=cmd_contract)

    theorems = ["1", "2", "3", "4", "lemma1"]
    for name, func, help_ in (
        ("check", cmd_check, "evaluate a theorem's hypotheses"),
        ("decompose", cmd_decompose, "decompose and certify"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--theorem", choices=theorems, required=True)
        s.add_argument("file")
        s.add_argument("--x", help="X (or X1): comma-separated vertices")
        s.add_argument("--x2", help="X2 for theorems 2 and 4")
        s.set_defaults(func=func)
        if name == "check":
            s.add_argument("--per-component", action="store_true",
                           help="check each weakly connected component separately")
        else:
            s.add_argument("--force", action="store_true",
                           help="run even if the hypotheses fail; report verified=false")
            s.add_argument("--out-dir", help="write factors and certificate into this directory")
            s.add_argument("--dot", action="store_true")

    s = sub.add_parser("verify", help="recompose two factors and test isomorphism")
    s.add_argument("original")
    s.add_argument("factor_a")
    s.add_argument("factor_b")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="generate a seeded instance")
    s.add_argument("--kind", choices=["ladm", "lemma1", "t3", "t4"])
    s.add_argument("--seed", type=int)
    s.add_argument("--config", help="JSON file with generator settings")
    for key in ("vertices", "arcs", "alphabet", "max_m", "max_n", "classes", "cross_arcs"):
        s.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int)
    graph_out(s)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("find-partitions", help="brute-force partitions passing a theorem check")
    s.add_argument("file")
    s.add_argument("--theorem", choices=["1", "2", "3", "4"], required=True)
    s.add_argument("--limit", type=int, default=10)
    s.add_argument("--bound", type=int, help=f"vertex bound (default ${dec.BOUND_ENV} or "
                                               f"{dec.DEFAULT_BRUTE_FORCE_BOUND})")
    s.set_defaults(func=cmd_find_partitions)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        sys.stdout.write(_dump({"status": "too_large", "message": str(exc)}))
        return EXIT_BOUND
    except (VrspError, _InputError, ValueError) as exc:
        sys.stdout.write(_dump({"status": "error", "error": type(exc).__name__, "message": str(exc)}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
