"""Quasi-isometry invariants of right-angled Artin groups.

The package computes the tree-of-cylinders splitting of a RAAG read off
from its defining graph, decorates the tree with relative quasi-isometry
data and stretch factors, and uses the decorated trees to decide, soundly,
whether two RAAGs are quasi-isometric.
"""

from .decide import (
    Factor,
    TypeI,
    TypeII,
    TypeIII,
    Verdict,
    classify_corpus,
    compare,
    detect_n_clique_tree_graded,
    free_product_nf,
    move_certificate,
    replay_moves,
)
from .decorations import (
    Decoration,
    embellish,
    naive_decoration,
    refine_to_fixpoint,
    structure_invariant,
)
from .graphs import (
    GraphError,
    MarkedGraph,
    ParseError,
    SimplicialGraph,
    canonical_code,
    cut_vertices,
    find_isomorphism,
    join_factors,
    maximal_biconnected_subgraphs,
    parse_graph,
)
from .jsj import GraphOfGroups, build_jsj, cylinder_blocks, edge_multiplicity
from .labels import FreeProductNormalForm, compare_labels, ends_of_label
from .raags import dovetail_status, qi_class_label, stretch_of_vertex

__all__ = [
    "Decoration",
    "Factor",
    "FreeProductNormalForm",
    "GraphError",
    "GraphOfGroups",
    "MarkedGraph",
    "ParseError",
    "SimplicialGraph",
    "TypeI",
    "TypeII",
    "TypeIII",
    "Verdict",
    "build_jsj",
    "canonical_code",
    "classify_corpus",
    "compare",
    "compare_labels",
    "cut_vertices",
    "cylinder_blocks",
    "detect_n_clique_tree_graded",
    "dovetail_status",
    "edge_multiplicity",
    "embellish",
    "ends_of_label",
    "find_isomorphism",
    "free_product_nf",
    "join_factors",
    "maximal_biconnected_subgraphs",
    "move_certificate",
    "naive_decoration",
    "parse_graph",
    "qi_class_label",
    "refine_to_fixpoint",
    "replay_moves",
    "stretch_of_vertex",
    "structure_invariant",
]

__version__ = "0.1.0"
