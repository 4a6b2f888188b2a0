"""
Exact planarity test with embedding / Kuratowski witnesses
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import networkx as nx

from ..errors import InvalidInputError
from .weighted_graph import GraphLike, as_weighted_graph

logger = logging.getLogger('planar_gap.graphs.planarity')


@dataclass
class PlanarityResult:
    """Planarity decision plus witness"""
    is_planar: bool
    # rotation system: vertex -> clockwise neighbor order (planar case)
    embedding: Optional[dict] = None
    # edges of a subdivision of K5 or K3,3 (non-planar case)
    kuratowski_edges: Optional[List[Tuple[int, int]]] = None
    kuratowski_kind: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            'planar': self.is_planar,
            'witness_kind': 'embedding' if self.is_planar else self.kuratowski_kind,
            'witness_edges': len(self.kuratowski_edges or []),
        }


def classify_kuratowski(witness: nx.Graph) -> Optional[str]:
    """
    Smooth away degree-2 vertices and report 'K5' or 'K3,3' if the
    result is one of the two Kuratowski graphs, else None.
    """
    H = nx.Graph(witness)
    H.remove_nodes_from([x for x in list(H.nodes) if H.degree(x) == 0])
    changed = True
    while changed:
        changed = False
        for x in list(H.nodes):
            if H.degree(x) == 2:
                a, b = list(H.neighbors(x))
                if H.has_edge(a, b):
                    continue
                H.remove_node(x)
                H.add_edge(a, b)
                changed = True
    if H.number_of_nodes() == 5 and nx.is_isomorphic(H, nx.complete_graph(5)):
        return 'K5'
    if H.number_of_nodes() == 6 and nx.is_isomorphic(H, nx.complete_bipartite_graph(3, 3)):
        return 'K3,3'
    return None


def check_planarity(G: GraphLike) -> PlanarityResult:
    """
    Exact planarity decision (left-right criterion via networkx).

    Disconnected input is rejected; split components first.
    """
    graph = as_weighted_graph(G)
    if not graph.is_connected():
        count, _ = graph.components()
        raise InvalidInputError(f"planarity check needs a connected graph, got {count} components")

    nxg = graph.to_networkx()
    planar, witness = nx.check_planarity(nxg, counterexample=True)
    if planar:
        rotation = {int(x): [int(y) for y in witness.neighbors_cw_order(x)] for x in witness.nodes}
        return PlanarityResult(is_planar=True, embedding=rotation)

    edges = sorted((min(int(u), int(v)), max(int(u), int(v))) for u, v in witness.edges)
    kind = classify_kuratowski(witness)
    logger.info(f"Graph with n={graph.n} is non-planar; witness {kind} with {len(edges)} edges")
    return PlanarityResult(is_planar=False, kuratowski_edges=edges, kuratowski_kind=kind)
