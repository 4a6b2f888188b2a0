"""
Unit tests for graph serialization and planarity
"""
import itertools
import json
import os
import tempfile
import unittest

import networkx as nx
import pytest

from conftest import complete_graph, random_connected_graph
from core.errors import GraphParseError, InvalidInputError, InvalidParameterError
from core.graphs import (
    HatTree, QuotientChain, WeightedGraph, build_hat_tree, build_weighted_chain, check_planarity,
    deserialize, guess_format, read_graph, serialize, subdivide_edges, write_graph,
)
from core.graphs.planarity import classify_kuratowski


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def _has_kuratowski_minor(G):
    """Search every family of disjoint connected branch sets for a K5 or K3,3 minor"""
    adjacency = {x: set() for x in range(G.n)}
    for u, v in G.edges.tolist():
        adjacency[u].add(v)
        adjacency[v].add(u)

    def connected(block):
        seen, stack = {block[0]}, [block[0]]
        while stack:
            for y in adjacency[stack.pop()] & set(block):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(block)

    def touching(a, b):
        return any(adjacency[x] & set(b) for x in a)

    # vertex -1 marks the deleted block
    for partition in _set_partitions([-1] + list(range(G.n))):
        blocks = [b for b in partition if -1 not in b]
        if len(blocks) not in (5, 6) or not all(connected(b) for b in blocks):
            continue
        if len(blocks) == 5:
            if all(touching(a, b) for a, b in itertools.combinations(blocks, 2)):
                return True
            continue
        for left in itertools.combinations(range(6), 3):
            right = [j for j in range(6) if j not in left]
            if all(touching(blocks[i], blocks[j]) for i in left for j in right):
                return True
    return False


class TestEdgelist(unittest.TestCase):
    """Test the edge-list text format"""

    def test_k2_text(self):
        text = serialize(complete_graph(2), 'edgelist').decode()
        self.assertEqual(text, "p wgraph 2 1\nv 0 1\nv 1 1\ne 0 1 1\n")

    def test_hat_tree_header(self):
        text = serialize(build_hat_tree(2, 2), 'edgelist').decode()
        self.assertTrue(text.startswith('#'))
        self.assertIn("p wgraph 13 20\n", text)

    def test_round_trip_identity(self):
        T = build_hat_tree(2, 2)
        self.assertEqual(deserialize(serialize(T, 'edgelist'), 'edgelist'), T.graph)
        G = random_connected_graph(15, seed=3)
        self.assertEqual(deserialize(serialize(G)), G)

    def test_comments_and_blank_lines(self):
        text = "# comment\n\np wgraph 2 1\nv 0 1\n# inner\nv 1 2.5\ne 0 1 3\n"
        G = deserialize(text)
        self.assertEqual(G.vertex_weight.tolist(), [1.0, 2.5])
        self.assertEqual(G.edge_weight.tolist(), [3.0])

    def test_truncated_names_line(self):
        text = "p wgraph 3 2\nv 0 1\nv 1 1\nv 2 1\ne 0 1 1\n"
        with self.assertRaises(GraphParseError) as ctx:
            deserialize(text)
        self.assertEqual(ctx.exception.line, 6)
        self.assertIn("line 6", str(ctx.exception))

    def test_bad_weight_names_line(self):
        text = "p wgraph 2 1\nv 0 1\nv 1 x\ne 0 1 1\n"
        with self.assertRaises(GraphParseError) as ctx:
            deserialize(text)
        self.assertEqual(ctx.exception.line, 3)

    def test_bad_header(self):
        with self.assertRaises(GraphParseError) as ctx:
            deserialize("graph 2 1\n")
        self.assertEqual(ctx.exception.line, 1)

    def test_empty_input(self):
        with self.assertRaises(GraphParseError):
            deserialize("")

    def test_self_loop_is_parse_error(self):
        with self.assertRaises(GraphParseError) as ctx:
            deserialize("p wgraph 2 1\nv 0 1\nv 1 1\ne 1 1 1\n")
        self.assertEqual(ctx.exception.line, 4)

    def test_nonpositive_vertex_weight_names_line(self):
        with self.assertRaises(GraphParseError) as ctx:
            deserialize("p wgraph 2 1\nv 0 1\nv 1 -3\ne 0 1 1\n")
        self.assertEqual(ctx.exception.line, 3)

    def test_nonpositive_edge_weight_names_line(self):
        with self.assertRaises(GraphParseError) as ctx:
            deserialize("p wgraph 3 2\nv 0 1\nv 1 1\nv 2 1\ne 0 1 1\n# zero\ne 1 2 0\n")
        self.assertEqual(ctx.exception.line, 7)

    def test_trailing_record(self):
        with self.assertRaises(GraphParseError) as ctx:
            deserialize("p wgraph 2 1\nv 0 1\nv 1 1\ne 0 1 1\ne 0 1 1\n")
        self.assertEqual(ctx.exception.line, 5)


class TestJson(unittest.TestCase):
    """Test the JSON format"""

    def test_hat_tree_round_trip(self):
        for h, k in [(1, 1), (2, 2), (3, 3)]:
            T = build_hat_tree(h, k)
            back = deserialize(serialize(T, 'json'), 'json')
            self.assertIsInstance(back, HatTree)
            self.assertEqual(back, T)

    def test_chain_round_trip(self):
        Q = subdivide_edges(build_weighted_chain(3), 4)
        back = deserialize(serialize(Q, 'json'), 'json')
        self.assertIsInstance(back, QuotientChain)
        self.assertEqual(back.provenance, 'Q_hk')
        self.assertEqual((back.h, back.k), (3, 4))
        self.assertTrue(back.same_weighted_graph(Q))

    def test_plain_graph_round_trip(self):
        G = random_connected_graph(10, seed=11)
        back = deserialize(serialize(G, 'json'), 'json')
        self.assertIsInstance(back, WeightedGraph)
        self.assertEqual(back, G)

    def test_invalid_json(self):
        with self.assertRaises(GraphParseError):
            deserialize('{"n": 2,', 'json')

    def test_missing_field(self):
        with self.assertRaises(GraphParseError):
            deserialize('{"n": 2, "vertices": []}', 'json')

    def test_hat_tree_without_root(self):
        doc = json.loads(serialize(build_hat_tree(2, 2), 'json'))
        del doc['meta']['root']
        with self.assertRaises(GraphParseError):
            deserialize(json.dumps(doc), 'json')

    def test_chain_without_height(self):
        doc = json.loads(serialize(build_weighted_chain(2), 'json'))
        del doc['meta']['h']
        with self.assertRaises(GraphParseError):
            deserialize(json.dumps(doc), 'json')

    def test_non_numeric_meta(self):
        doc = json.loads(serialize(build_hat_tree(1, 2), 'json'))
        doc['meta']['k'] = 'two'
        with self.assertRaises(GraphParseError):
            deserialize(json.dumps(doc), 'json')

    def test_root_out_of_range(self):
        doc = json.loads(serialize(build_hat_tree(1, 2), 'json'))
        doc['meta']['root'] = 99
        with self.assertRaises(GraphParseError):
            deserialize(json.dumps(doc), 'json')



class TestDotAndFiles(unittest.TestCase):
    """Test DOT export and file helpers"""

    def test_dot_export(self):
        text = serialize(build_hat_tree(1, 1), 'dot').decode()
        self.assertTrue(text.startswith("graph G {"))
        self.assertEqual(sum('[label=' in line for line in text.splitlines()), 3)
        self.assertIn("style=dashed", text)

    def test_dot_is_export_only(self):
        with self.assertRaises(InvalidParameterError):
            deserialize("graph G {}", 'dot')

    def test_unknown_format(self):
        with self.assertRaises(InvalidParameterError):
            serialize(complete_graph(2), 'graphml')

    def test_guess_format(self):
        self.assertEqual(guess_format('a.json'), 'json')
        self.assertEqual(guess_format('a.wg'), 'edgelist')
        self.assertEqual(guess_format('a.dot'), 'dot')
        self.assertEqual(guess_format('a.unknown'), 'edgelist')

    def test_write_and_read(self):
        T = build_hat_tree(2, 4)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_graph(T, os.path.join(tmp, 'tree.json'))
            self.assertEqual(read_graph(path), T)
            path = write_graph(T, os.path.join(tmp, 'tree.wg'))
            self.assertEqual(read_graph(path), T.graph)


class TestPlanarity(unittest.TestCase):
    """Test the exact planarity check"""

    def test_k4_planar(self):
        result = check_planarity(complete_graph(4))
        self.assertTrue(result.is_planar)
        self.assertEqual(len(result.embedding), 4)
        self.assertEqual(result.to_dict()['witness_kind'], 'embedding')

    def test_k5_not_planar(self):
        result = check_planarity(complete_graph(5))
        self.assertFalse(result.is_planar)
        self.assertEqual(result.kuratowski_kind, 'K5')
        self.assertEqual(len(result.kuratowski_edges), 10)

    def test_k33_not_planar(self):
        edges = [(a, b) for a in range(3) for b in range(3, 6)]
        result = check_planarity(WeightedGraph.from_edges(6, edges))
        self.assertFalse(result.is_planar)
        self.assertEqual(result.kuratowski_kind, 'K3,3')

    def test_subdivided_k33_classified(self):
        H = nx.Graph()
        H.add_edges_from([(0, 6), (6, 3)] + [(a, b) for a in range(3) for b in range(3, 6) if (a, b) != (0, 3)])
        self.assertEqual(classify_kuratowski(H), 'K3,3')

    def test_hat_trees_planar(self):
        for h in range(1, 5):
            for k in (1, 2, 2 ** h):
                self.assertTrue(check_planarity(build_hat_tree(h, k)).is_planar, f"h={h} k={k}")

    @pytest.mark.slow
    def test_large_hat_trees_planar(self):
        for h in (5, 6):
            for k in (1, 2 ** h):
                self.assertTrue(check_planarity(build_hat_tree(h, k)).is_planar, f"h={h} k={k}")

    @pytest.mark.slow
    def test_rejections_confirmed_by_minor_search(self):
        """Random 8-vertex graphs: non-planar exactly when a K5 or K3,3 minor exists"""
        rejected = 0
        for seed in range(40):
            G = random_connected_graph(8, seed=seed, extra_edges=10, weighted=False)
            result = check_planarity(G)
            rejected += not result.is_planar
            self.assertEqual(_has_kuratowski_minor(G), not result.is_planar, f"seed={seed}")
        self.assertGreater(rejected, 0)

    def test_minor_search_on_known_graphs(self):
        self.assertTrue(_has_kuratowski_minor(complete_graph(5)))
        self.assertTrue(_has_kuratowski_minor(
            WeightedGraph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])))
        self.assertFalse(_has_kuratowski_minor(build_hat_tree(1, 2)))

    def test_disconnected_rejected(self):
        with self.assertRaises(InvalidInputError):
            check_planarity(WeightedGraph.from_edges(4, [(0, 1), (2, 3)]))


if __name__ == '__main__':
    unittest.main()
