"""GraphDocument (JSON) serialization and DOT export.

A document looks like::

    {
      "format_version": "1",
      "vertices": [{"id": "u1"}, {"id": "u2"}],
      "arcs": [
        {"id": "a0", "tail": "u1", "head": "u2", "action": "a", "weight": "1"}
      ]
    }

Weights are decimal strings (``"0.5"``) or exact ratios (``"1/3"``) and
are read as exact rationals. An optional ``"partition"`` object maps side
names (``x``, ``y``, ``x1``, ``x2``) to vertex lists; generators use it to
ship the split an instance was built for.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import GraphError, ParseError
from .graph import Arc, LabelPair, Ladm, format_weight

FORMAT_VERSION = "1"
_TOP_KEYS = {"format_version", "vertices", "arcs", "partition"}
_ARC_KEYS = {"id", "tail", "head", "action", "weight"}


@dataclass(frozen=True)
class GraphDocument:
    graph: Ladm
    partition: Mapping[str, tuple[str, ...]] = field(default_factory=dict)


def _line_of(text: str, needle: str) -> int | None:
    idx = text.find(needle)
    return None if idx < 0 else text.count("\n", 0, idx) + 1


def parse_document(text: str) -> GraphDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object", line=1)
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", field=sorted(unknown)[0])
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}", field="format_version")

    vertices = []
    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list):
        raise ParseError("expected a list", field="vertices")
    for i, item in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if not isinstance(item, dict) or set(item) != {"id"}:
            raise ParseError("expected {\"id\": ...}", field=where)
        if not isinstance(item["id"], str) or not item["id"]:
            raise ParseError("vertex id must be a nonempty string", field=f"{where}.id")
        vertices.append(item["id"])
    if len(set(vertices)) != len(vertices):
        raise ParseError("duplicate vertex ids", field="vertices")

    arcs = []
    raw_arcs = data.get("arcs")
    if not isinstance(raw_arcs, list):
        raise ParseError("expected a list", field="arcs")
    for i, item in enumerate(raw_arcs):
        where = f"arcs[{i}]"
        if not isinstance(item, dict) or set(item) != _ARC_KEYS:
            raise ParseError(f"arc needs exactly the keys {sorted(_ARC_KEYS)}", field=where)
        for key in _ARC_KEYS:
            if not isinstance(item[key], str):
                raise ParseError("expected a string", field=f"{where}.{key}")
        try:
            label = LabelPair(item["action"], item["weight"])
        except GraphError as exc:
            bad = "action" if not item["action"] else "weight"
            raise ParseError(str(exc), field=f"{where}.{bad}",
                             line=_line_of(text, json.dumps(item[bad]))) from None
        arcs.append(Arc(item["id"], item["tail"], item["head"], label))

    partition = {}
    raw_part = data.get("partition", {})
    if not isinstance(raw_part, dict):
        raise ParseError("expected an object", field="partition")
    for side, members in raw_part.items():
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            raise ParseError("expected a list of vertex ids", field=f"partition.{side}")
        partition[side] = tuple(members)

    # CycleDetected / DanglingEnd propagate unchanged
    graph = Ladm(vertices, arcs)
    return GraphDocument(graph, partition)


def parse_graph(text: str) -> Ladm:
    return parse_document(text).graph


def document_dict(g: Ladm, partition: Mapping[str, tuple[str, ...]] | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "vertices": [{"id": v} for v in g.vertices],
        "arcs": [
            {
                "id": a.id,
                "tail": a.tail,
                "head": a.head,
                "action": a.label.action,
                "weight": format_weight(a.label.weight),
            }
            for a in g.arcs
        ],
    }
    if partition:
        doc["partition"] = {k: sorted(v) for k, v in sorted(partition.items())}
    return doc


def emit_graph(g: Ladm, partition: Mapping[str, tuple[str, ...]] | None = None) -> str:
    """Canonical text: vertices by name, arcs by (tail, head, label, id)."""
    return json.dumps(document_dict(g, partition), indent=2, ensure_ascii=False) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(g: Ladm, name: str = "G") -> str:
    lines = [f"digraph {_dot_quote(name)} {{"]
    lines += [f"  {_dot_quote(v)};" for v in g.vertices]
    lines += [
        f"  {_dot_quote(a.tail)} -> {_dot_quote(a.head)} [label={_dot_quote(str(a.label))}];"
        for a in g.arcs
    ]
    lines.append("}")
    return "\n".join(lines) + "\n"
