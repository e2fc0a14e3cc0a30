"""Vertex-removing synchronised products of labelled acyclic directed multigraphs,
and the contraction-based decompositions built on them."""

from .decomposition import (
    DecompositionCertificate,
    T3Hypotheses,
    T4Hypotheses,
    find_partitions,
    lemma1_check,
    lemma1_decompose,
    recompose_and_verify,
    t1_check,
    t1_decompose,
    t2_check,
    t2_decompose,
    t3_check,
    t3_decompose,
    t4_check,
    t4_decompose,
)
from .graph import (
    Arc,
    Cut,
    LabelPair,
    Ladm,
    LevelAssignment,
    arc_induced_subgraph,
    build_graph,
    cut,
    in_degree,
    induced_subgraph,
    is_complete_bipartite,
    levels,
    out_degree,
    sink_set,
    source_set,
    weakly_connected_components,
)
from .io import emit_dot, emit_graph, parse_graph
from .products import cartesian_product, intermediate_product, vrsp
from .transform import IsoWitness, check_mapping, contract, contract_twice, is_isomorphic

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "Cut",
    "DecompositionCertificate",
    "IsoWitness",
    "LabelPair",
    "Ladm",
    "LevelAssignment",
    "T3Hypotheses",
    "T4Hypotheses",
    "arc_induced_subgraph",
    "build_graph",
    "cartesian_product",
    "check_mapping",
    "contract",
    "contract_twice",
    "cut",
    "emit_dot",
    "emit_graph",
    "find_partitions",
    "in_degree",
    "induced_subgraph",
    "intermediate_product",
    "is_complete_bipartite",
    "is_isomorphic",
    "lemma1_check",
    "lemma1_decompose",
    "levels",
    "out_degree",
    "parse_graph",
    "recompose_and_verify",
    "sink_set",
    "source_set",
    "t1_check",
    "t1_decompose",
    "t2_check",
    "t2_decompose",
    "t3_check",
    "t3_decompose",
    "t4_check",
    "t4_decompose",
    "vrsp",
    "weakly_connected_components",
]
