"""Weighted undirected graph with a node-to-module assignment.

The graph is immutable after construction and stored in CSR form so the
centrality kernels can operate on flat arrays.  Edges carry strictly
positive finite weights; an absent edge means "no connection" (infinite
cost) and is never stored.  Every node belongs to exactly one module,
and module indices are part of the input, not inferred.

This module also owns the text file format shared by the CLI and the
generator, the internal/external edge classification, and the quotient
(module-level) graph construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, TextIO

import numpy as np


class GraphError(ValueError):
    """Base class for graph construction and parsing failures."""


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class DanglingNodeId(GraphError):
    pass


class NonContiguousModules(GraphError):
    pass


class GraphSyntaxError(GraphError):
    """Malformed graph file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Edge(NamedTuple):
    u: int
    v: int
    weight: float

    def canonical(self) -> "Edge":
        return self if self.u <= self.v else Edge(self.v, self.u, self.weight)


#: Measure tags accepted by CentralityVector.
MEASURES = ("BC", "LC", "EC", "IC", "GC")

#: Relative tolerance for comparing sums of edge weights.  Integer weights
#: sum exactly in doubles, so this only matters for user-supplied decimals.
REL_TOL = 1e-12

#: Negative scores smaller than this (in magnitude) are treated as
#: accumulated rounding noise and clamped to zero.
_NEG_EPS = 1e-9


def close(a: float, b: float) -> bool:
    """Weight-sum equality under the library-wide relative tolerance."""
    if a == b:
        return True
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(a - b) <= REL_TOL * max(abs(a), abs(b))


@dataclass(frozen=True)
class CentralityVector:
    """Per-node scores for one centrality measure."""

    measure: str
    scores: np.ndarray

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure tag {self.measure!r}")
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 1:
            raise ValueError("scores must be a 1-d vector")
        if not np.all(np.isfinite(scores)):
            raise ValueError(f"{self.measure} scores must be finite")
        if scores.size and scores.min() < -_NEG_EPS:
            raise ValueError(f"{self.measure} scores must be non-negative")
        # Clamp rounding noise so downstream invariants (scores >= 0) hold.
        scores = np.where((scores < 0.0) & (scores > -_NEG_EPS), 0.0, scores)
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return self.scores.size

    def __getitem__(self, node: int) -> float:
        return float(self.scores[node])

    def argmax(self) -> int:
        """Index of the maximum score; ties resolve to the smallest index."""
        return int(np.argmax(self.scores))


class Graph:
    """Immutable weighted undirected graph with per-node module labels.

    Use :func:`build_graph` or :func:`parse_graph` to construct one; the
    constructor itself trusts its inputs.
    """

    __slots__ = ("node_count", "indptr", "indices", "weights", "module_of",
                 "module_count", "meta")

    def __init__(self, node_count: int, indptr: np.ndarray, indices: np.ndarray,
                 weights: np.ndarray, module_of: np.ndarray,
                 meta: Mapping[str, str] | None = None):
        self.node_count = node_count
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.module_of = module_of
        self.module_count = int(module_of.max()) + 1 if node_count else 0
        self.meta = dict(meta) if meta else {}
        for arr in (self.indptr, self.indices, self.weights, self.module_of):
            arr.setflags(write=False)

    # -- inspection ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self.indices.size // 2

    def adjacency(self, v: int) -> list[tuple[int, float]]:
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return [(int(n), float(w))
                for n, w in zip(self.indices[lo:hi], self.weights[lo:hi])]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self) -> Iterator[Edge]:
        """Unique edges in (u, v) order with u < v."""
        for u in range(self.node_count):
            lo, hi = self.indptr[u], self.indptr[u + 1]
            for n, w in zip(self.indices[lo:hi], self.weights[lo:hi]):
                if u < n:
                    yield Edge(u, int(n), float(w))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and np.array_equal(self.module_of, other.module_of)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights))

    def __repr__(self) -> str:
        return (f"Graph(nodes={self.node_count}, edges={self.edge_count}, "
                f"modules={self.module_count})")


def build_graph(nodes: int, edges: Iterable[Edge | tuple], module_of: Sequence[int],
                meta: Mapping[str, str] | None = None) -> Graph:
    """Validate inputs and assemble the CSR graph.

    Raises DuplicateEdge, SelfLoop, NonPositiveWeight, DanglingNodeId or
    NonContiguousModules on the first offending input.  The adjacency of
    the result is sorted, so any permutation of the edge list produces an
    identical graph.
    """
    if nodes < 0:
        raise GraphError("node count must be non-negative")
    if len(module_of) != nodes:
        raise GraphError(f"module_of has {len(module_of)} entries for {nodes} nodes")

    modules = np.asarray(module_of, dtype=np.int64)
    if nodes:
        if modules.min() < 0:
            raise NonContiguousModules("negative module index")
        k = int(modules.max()) + 1
        present = np.zeros(k, dtype=bool)
        present[modules] = True
        if not present.all():
            missing = int(np.flatnonzero(~present)[0])
            raise NonContiguousModules(f"module indices not contiguous: {missing} unused")

    canon: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for e in edges:
        u, v, w = (e.u, e.v, e.weight) if isinstance(e, Edge) else e
        u, v, w = int(u), int(v), float(w)
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        if not (0 <= u < nodes) or not (0 <= v < nodes):
            raise DanglingNodeId(f"edge ({u}, {v}) references a node outside 0..{nodes - 1}")
        if not (w > 0.0) or math.isinf(w):
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}; weights must be "
                                    "finite and > 0")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"duplicate edge ({key[0]}, {key[1]})")
        seen.add(key)
        canon.append((key[0], key[1], w))

    m = len(canon)
    src = np.empty(2 * m, dtype=np.int64)
    dst = np.empty(2 * m, dtype=np.int64)
    wgt = np.empty(2 * m, dtype=np.float64)
    for i, (u, v, w) in enumerate(canon):
        src[2 * i], dst[2 * i], wgt[2 * i] = u, v, w
        src[2 * i + 1], dst[2 * i + 1], wgt[2 * i + 1] = v, u, w

    order = np.lexsort((dst, src))
    src, dst, wgt = src[order], dst[order], wgt[order]
    indptr = np.zeros(nodes + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Graph(nodes, indptr, dst, wgt, modules, meta)


# -- module partition ---------------------------------------------------

@dataclass(frozen=True)
class ModulePartition:
    """Classification of a graph's edges into internal and external sets.

    ``internal_edges[i]`` holds the edges with both endpoints in module i;
    ``external_edges`` holds every cross-module edge together with its two
    incident module indices; ``external_vertices[i]`` lists the nodes of
    module i that touch at least one external edge.
    """

    module_count: int
    members: tuple[tuple[int, ...], ...]
    internal_edges: tuple[tuple[Edge, ...], ...]
    external_edges: tuple[tuple[Edge, int, int], ...]
    external_vertices: tuple[tuple[int, ...], ...]

    def module_pairs(self) -> dict[tuple[int, int], list[Edge]]:
        """External edges grouped by unordered module pair (i < j)."""
        pairs: dict[tuple[int, int], list[Edge]] = {}
        for edge, mi, mj in self.external_edges:
            key = (mi, mj) if mi < mj else (mj, mi)
            pairs.setdefault(key, []).append(edge)
        return pairs


def classify_edges(g: Graph) -> ModulePartition:
    """Split the edge set into per-module internal edges and external edges."""
    k = g.module_count
    members: list[list[int]] = [[] for _ in range(k)]
    for v in range(g.node_count):
        members[int(g.module_of[v])].append(v)

    internal: list[list[Edge]] = [[] for _ in range(k)]
    external: list[tuple[Edge, int, int]] = []
    ext_nodes: list[set[int]] = [set() for _ in range(k)]
    for e in g.edges():
        mu, mv = int(g.module_of[e.u]), int(g.module_of[e.v])
        if mu == mv:
            internal[mu].append(e)
        else:
            external.append((e, mu, mv))
            ext_nodes[mu].add(e.u)
            ext_nodes[mv].add(e.v)

    return ModulePartition(
        module_count=k,
        members=tuple(tuple(ms) for ms in members),
        internal_edges=tuple(tuple(es) for es in internal),
        external_edges=tuple(external),
        external_vertices=tuple(tuple(sorted(s)) for s in ext_nodes),
    )


def quotient_graph(p: ModulePartition, g: Graph) -> Graph:
    """Collapse each module to one node.

    Module pairs joined by several parallel external edges collapse to a
    single edge carrying the minimum weight of the parallel set, so
    shortest paths over the quotient are well defined on a simple graph.
    Each quotient node is labeled as its own module.
    """
    quotient_edges = [Edge(i, j, min(e.weight for e in es))
                      for (i, j), es in sorted(p.module_pairs().items())]
    return build_graph(p.module_count, quotient_edges, list(range(p.module_count)))


# -- file format ----------------------------------------------------------
#
#   # comment            (ignored)
#   n <id> <module>      (all node lines first; ids 0..N-1, no gaps)
#   e <u> <v> <weight>   (weight a positive decimal)


def parse_graph_file(text: str | bytes) -> Graph:
    """Parse the line-oriented graph format. Strict; rejects gaps and junk."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    node_modules: dict[int, int] = {}
    edges: list[Edge] = []
    meta: dict[str, str] = {}
    edges_started = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            # "# key: value" comments round-trip as metadata
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                if key and " " not in key.strip():
                    meta[key.strip()] = value.strip()
            continue
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "n":
            if edges_started:
                raise GraphSyntaxError("node line after edge lines", lineno)
            if len(parts) != 3:
                raise GraphSyntaxError("node line needs 'n <id> <module>'", lineno)
            try:
                nid, mod = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphSyntaxError("node id and module must be integers", lineno)
            if nid < 0 or mod < 0:
                raise GraphSyntaxError("node id and module must be non-negative", lineno)
            if nid in node_modules:
                raise GraphSyntaxError(f"node {nid} declared twice", lineno)
            node_modules[nid] = mod
        elif tag == "e":
            edges_started = True
            if len(parts) != 4:
                raise GraphSyntaxError("edge line needs 'e <u> <v> <weight>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
                w = float(parts[3])
            except ValueError:
                raise GraphSyntaxError("edge endpoints must be integers, weight a decimal",
                                       lineno)
            if u not in node_modules or v not in node_modules:
                missing = u if u not in node_modules else v
                raise DanglingNodeId(f"line {lineno}: edge references undeclared node {missing}")
            edges.append(Edge(u, v, w))
        else:
            raise GraphSyntaxError(f"unknown line tag {tag!r}", lineno)

    n = len(node_modules)
    if sorted(node_modules) != list(range(n)):
        raise GraphSyntaxError(f"node ids must be 0..{n - 1} with no gaps")
    return build_graph(n, edges, [node_modules[i] for i in range(n)], meta)


def serialize_graph(g: Graph) -> str:
    """Inverse of :func:`parse_graph_file`; weights use shortest round-trip repr."""
    lines = [f"# {key}: {value}" for key, value in g.meta.items()]
    lines += [f"n {v} {int(g.module_of[v])}" for v in range(g.node_count)]
    lines += [f"e {e.u} {e.v} {e.weight!r}" for e in g.edges()]
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph_file(f.read())


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_graph(g))


# -- CSV emission -----------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def write_node_csv(f: TextIO, g: Graph, columns: Mapping[str, np.ndarray],
                   scale: float = 1.0) -> None:
    """Write `node,module,<columns...>` with 9 significant digits per score."""
    names = list(columns)
    f.write("node,module," + ",".join(names) + "\n")
    for v in range(g.node_count):
        scores = ",".join(_fmt(columns[name][v] * scale) for name in names)
        f.write(f"{v},{int(g.module_of[v])},{scores}\n")


def write_module_csv(f: TextIO, values: Sequence[float], name: str = "ec_module",
                     scale: float = 1.0) -> None:
    f.write(f"module,{name}\n")
    for i, val in enumerate(values):
        f.write(f"{i},{_fmt(val * scale)}\n")
