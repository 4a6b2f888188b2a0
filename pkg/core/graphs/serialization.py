"""
Graph serialization: edge-list text, JSON (round-trip) and DOT (export only)

Edge-list format:
    p wgraph <n> <m>
    v <id> <pi>        (n lines)
    e <u> <v> <w>      (m lines)
Lines starting with '#' are comments.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import GraphParseError, InvalidInputError, InvalidParameterError
from .weighted_graph import (
    PATH_EDGE, TREE_EDGE, GraphLike, HatTree, QuotientChain, WeightedGraph, as_weighted_graph,
)

logger = logging.getLogger('planar_gap.graphs.serialization')

FORMATS = ('edgelist', 'json', 'dot')
SUFFIXES = {'.wg': 'edgelist', '.edgelist': 'edgelist', '.txt': 'edgelist',
            '.json': 'json', '.dot': 'dot', '.gv': 'dot'}


def format_weight(value: float) -> str:
    """Integral weights print as integers, others with the shortest round-trip repr"""
    value = float(value)
    if value.is_integer() and abs(value) < 2 ** 63:
        return str(int(value))
    return repr(value)


def _json_weight(value: float) -> Union[int, float]:
    value = float(value)
    return int(value) if value.is_integer() and abs(value) < 2 ** 63 else value


# --- edge list -------------------------------------------------------------------

def _to_edgelist(obj: GraphLike) -> str:
    graph = as_weighted_graph(obj)
    lines = []
    if isinstance(obj, HatTree):
        lines.append(f"# hat tree h={obj.h} k={obj.k} root={obj.root}")
    elif isinstance(obj, QuotientChain):
        lines.append(f"# quotient chain {obj.provenance} h={obj.h} k={obj.k}")
    lines.append(f"p wgraph {graph.n} {graph.m}")
    lines.extend(f"v {x} {format_weight(p)}" for x, p in enumerate(graph.vertex_weight))
    lines.extend(f"e {u} {v} {format_weight(w)}"
                 for (u, v), w in zip(graph.edges.tolist(), graph.edge_weight))
    return "\n".join(lines) + "\n"


def _parse_number(token: str, lineno: int, what: str, integer: bool = False):
    try:
        return int(token) if integer else float(token)
    except ValueError:
        raise GraphParseError(f"invalid {what} {token!r}", lineno) from None


def _from_edgelist(text: str) -> WeightedGraph:
    records: List[Tuple[int, List[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        records.append((lineno, line.split()))
    last_line = len(text.splitlines())

    if not records:
        raise GraphParseError("empty input, expected 'p wgraph <n> <m>' header", 1)
    lineno, head = records[0]
    if len(head) != 4 or head[0] != 'p' or head[1] != 'wgraph':
        raise GraphParseError("expected header 'p wgraph <n> <m>'", lineno)
    n = _parse_number(head[2], lineno, "vertex count", integer=True)
    m = _parse_number(head[3], lineno, "edge count", integer=True)
    if n < 1 or m < 0:
        raise GraphParseError(f"invalid counts n={n} m={m}", lineno)

    body = records[1:]
    if len(body) < n + m:
        raise GraphParseError(
            f"truncated input: expected {n} vertex and {m} edge lines, found {len(body)}",
            last_line + 1,
        )
    if len(body) > n + m:
        raise GraphParseError("unexpected trailing record", body[n + m][0])

    pi = np.empty(n)
    seen = np.zeros(n, dtype=bool)
    for lineno, tokens in body[:n]:
        if len(tokens) != 3 or tokens[0] != 'v':
            raise GraphParseError("expected 'v <id> <pi>'", lineno)
        x = _parse_number(tokens[1], lineno, "vertex id", integer=True)
        if not 0 <= x < n or seen[x]:
            raise GraphParseError(f"vertex id {x} out of range or repeated", lineno)
        seen[x] = True
        pi[x] = _parse_number(tokens[2], lineno, "vertex weight")
        if not (np.isfinite(pi[x]) and pi[x] > 0):
            raise GraphParseError(f"vertex {x} has nonpositive weight {pi[x]}", lineno)

    uv = np.empty((m, 2), dtype=np.int64)
    w = np.empty(m)
    for i, (lineno, tokens) in enumerate(body[n:]):
        if len(tokens) != 4 or tokens[0] != 'e':
            raise GraphParseError("expected 'e <u> <v> <w>'", lineno)
        uv[i, 0] = _parse_number(tokens[1], lineno, "endpoint", integer=True)
        uv[i, 1] = _parse_number(tokens[2], lineno, "endpoint", integer=True)
        w[i] = _parse_number(tokens[3], lineno, "edge weight")
        if not (0 <= uv[i, 0] < n and 0 <= uv[i, 1] < n):
            raise GraphParseError(f"edge endpoint out of range [0, {n})", lineno)
        u, v = int(uv[i, 0]), int(uv[i, 1])
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if not (np.isfinite(w[i]) and w[i] > 0):
            raise GraphParseError(f"edge {u}-{v} has nonpositive weight {w[i]}", lineno)

    try:
        return WeightedGraph.from_arrays(n, uv, w, pi)
    except InvalidInputError as e:
        raise GraphParseError(str(e)) from e


# --- json ------------------------------------------------------------------------

def _to_json(obj: GraphLike) -> str:
    graph = as_weighted_graph(obj)
    vertices = []
    for x, p in enumerate(graph.vertex_weight):
        record = {'id': x, 'pi': _json_weight(p)}
        if isinstance(obj, HatTree):
            record['level'] = int(obj.level[x])
        vertices.append(record)
    edges = []
    for i, ((u, v), w) in enumerate(zip(graph.edges.tolist(), graph.edge_weight)):
        record = {'u': u, 'v': v, 'w': _json_weight(w)}
        if isinstance(obj, HatTree):
            record['kind'] = obj.edge_kind[i]
        edges.append(record)
    doc: Dict = {'n': graph.n, 'vertices': vertices, 'edges': edges}
    if isinstance(obj, HatTree):
        doc['meta'] = obj.to_meta()
        if not obj.has_level_paths:
            doc['meta']['level_paths'] = False
    elif isinstance(obj, QuotientChain):
        doc['meta'] = {'h': obj.h, 'k': obj.k, 'provenance': obj.provenance}
    return json.dumps(doc, indent=2) + "\n"


def _derive_branch_words(n: int, root: int, level: np.ndarray, tree: np.ndarray) -> Tuple[str, ...]:
    """Two tree children get L/R in id order; a single child inherits its parent's word"""
    parent_side = np.where(level[tree[:, 0]] < level[tree[:, 1]], tree[:, 0], tree[:, 1])
    child_side = np.where(level[tree[:, 0]] < level[tree[:, 1]], tree[:, 1], tree[:, 0])
    children: Dict[int, List[int]] = {}
    for p, c in zip(parent_side.tolist(), child_side.tolist()):
        children.setdefault(p, []).append(c)
    words = [''] * n
    for x in sorted(range(n), key=lambda v: (int(level[v]), v)):
        kids = sorted(children.get(x, []))
        if len(kids) == 1:
            words[kids[0]] = words[x]
        else:
            for side, c in zip('LR', kids):
                words[c] = words[x] + side
    return tuple(words)


def _from_json(text: str) -> Union[WeightedGraph, HatTree, QuotientChain]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"invalid JSON: {e.msg}", e.lineno) from None
    try:
        n = int(doc['n'])
        vertices = sorted(doc['vertices'], key=lambda r: int(r['id']))
        if [int(r['id']) for r in vertices] != list(range(n)):
            raise GraphParseError("vertex ids must be exactly 0..n-1")
        pi = np.array([float(r['pi']) for r in vertices])
        edge_records = doc['edges']
        uv = np.array([(int(r['u']), int(r['v'])) for r in edge_records], dtype=np.int64).reshape(-1, 2)
        w = np.array([float(r['w']) for r in edge_records])
        meta = doc.get('meta') or {}
    except (KeyError, TypeError, ValueError) as e:
        raise GraphParseError(f"missing or malformed field: {e}") from None

    try:
        graph = WeightedGraph.from_arrays(n, uv, w, pi)
    except InvalidInputError as e:
        raise GraphParseError(str(e)) from e

    try:
        if 'provenance' in meta:
            return QuotientChain(graph=graph, provenance=str(meta['provenance']),
                                 h=int(meta['h']), k=int(meta.get('k', 1)))
        if not meta or not all('level' in r for r in vertices):
            return graph
        level = np.array([int(r['level']) for r in vertices], dtype=np.int64)
        h, k, root = int(meta['h']), int(meta['k']), int(meta['root'])
        kind_of = {}
        for r in edge_records:
            u, v = int(r['u']), int(r['v'])
            kind_of[(min(u, v), max(u, v))] = r.get('kind', TREE_EDGE)
    except (KeyError, TypeError, ValueError) as e:
        raise GraphParseError(f"missing or malformed metadata: {e}") from None

    kinds = tuple(kind_of[(int(u), int(v))] for u, v in graph.edges)
    if any(kd not in (TREE_EDGE, PATH_EDGE) for kd in kinds):
        raise GraphParseError("edge kind must be 'tree' or 'path'")
    if not 0 <= root < n:
        raise GraphParseError(f"root {root} out of range [0, {n})")
    tree = graph.edges[np.array([kd == TREE_EDGE for kd in kinds], dtype=bool)]
    level.setflags(write=False)
    hat = HatTree(graph=graph, h=h, k=k, root=root, level=level,
                  edge_kind=kinds, branch_word=_derive_branch_words(n, root, level, tree),
                  has_level_paths=bool(meta.get('level_paths', True)))
    try:
        hat.validate()
    except InvalidInputError as e:
        raise GraphParseError(f"hat tree metadata inconsistent: {e}") from e
    return hat


# --- dot -------------------------------------------------------------------------

def _to_dot(obj: GraphLike) -> str:
    graph = as_weighted_graph(obj)
    lines = ["graph G {", "  node [shape=circle, fontsize=10];"]
    for x, p in enumerate(graph.vertex_weight):
        lines.append(f'  {x} [label="{x}\\npi={format_weight(p)}"];')
    if isinstance(obj, HatTree):
        for ids in obj.level_sets():
            lines.append("  { rank=same; " + "; ".join(str(int(x)) for x in ids) + "; }")
    for i, ((u, v), w) in enumerate(zip(graph.edges.tolist(), graph.edge_weight)):
        style = ""
        if isinstance(obj, HatTree) and obj.edge_kind[i] == PATH_EDGE:
            style = ", style=dashed"
        lines.append(f'  {u} -- {v} [weight="{format_weight(w)}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- public api ------------------------------------------------------------------

def serialize(obj: GraphLike, fmt: str = 'edgelist') -> bytes:
    """Encode a graph; 'dot' is export-only"""
    if fmt == 'edgelist':
        text = _to_edgelist(obj)
    elif fmt == 'json':
        text = _to_json(obj)
    elif fmt == 'dot':
        text = _to_dot(obj)
    else:
        raise InvalidParameterError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return text.encode('utf-8')


def deserialize(data: Union[bytes, str], fmt: str = 'edgelist') -> Union[WeightedGraph, HatTree, QuotientChain]:
    """Inverse of `serialize` for 'edgelist' and 'json'"""
    text = data.decode('utf-8') if isinstance(data, bytes) else data
    if fmt == 'edgelist':
        return _from_edgelist(text)
    if fmt == 'json':
        return _from_json(text)
    if fmt == 'dot':
        raise InvalidParameterError("DOT is an export-only format")
    raise InvalidParameterError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def guess_format(path: Union[str, Path], default: str = 'edgelist') -> str:
    return SUFFIXES.get(Path(path).suffix.lower(), default)


def write_graph(obj: GraphLike, path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    path = Path(path)
    fmt = fmt or guess_format(path)
    path.write_bytes(serialize(obj, fmt))
    logger.info(f"Wrote {fmt} graph to {path}")
    return path


def read_graph(path: Union[str, Path], fmt: Optional[str] = None) -> Union[WeightedGraph, HatTree, QuotientChain]:
    path = Path(path)
    fmt = fmt or guess_format(path)
    return deserialize(path.read_bytes(), fmt)
