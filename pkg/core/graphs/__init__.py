"""
Graph construction, validation and serialization
"""
from .weighted_graph import WeightedGraph, HatTree, QuotientChain, as_weighted_graph, TREE_EDGE, PATH_EDGE
from .constructions import (
    build_binary_tree, build_hat_tree, build_weighted_chain, subdivide_edges,
    quotient_by_levels, degree_stats, count_formulas,
)
from .planarity import check_planarity, PlanarityResult
from .serialization import FORMATS, serialize, deserialize, guess_format, read_graph, write_graph

__all__ = [
    'WeightedGraph', 'HatTree', 'QuotientChain', 'as_weighted_graph', 'TREE_EDGE', 'PATH_EDGE',
    'build_binary_tree', 'build_hat_tree', 'build_weighted_chain', 'subdivide_edges',
    'quotient_by_levels', 'degree_stats', 'count_formulas',
    'check_planarity', 'PlanarityResult',
    'FORMATS', 'serialize', 'deserialize', 'guess_format', 'read_graph', 'write_graph',
]
