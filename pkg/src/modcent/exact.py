"""Exact betweenness centrality.

Two independent routes to the same number:

* :func:`brandes_bc`: Dijkstra plus reverse dependency accumulation over
  the predecessor DAG, the standard exact algorithm.  Compiled kernels,
  parallel over sources.
* :func:`brute_force_bc`: literal enumeration of every shortest path of
  every ordered pair, in plain Python.  Exponential in the worst case and
  capped at 64 nodes; exists purely as a test oracle.

Both use the ordered-pair convention: the pair (s, t) and the pair (t, s)
are counted separately, which doubles every score relative to the
unordered convention on undirected graphs.  Endpoints never receive
credit for their own pairs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .graph import CentralityVector, Edge, Graph, GraphError, build_graph, close

#: Sources per work unit; partial vectors merge in block order, so results
#: do not depend on the thread count.
BLOCK = 256

_PAIR_MODES = {None: 0, "all": 0, "cross-module": 1, "within-module": 2}


class GraphTooLarge(GraphError):
    """The brute-force oracle refuses graphs it cannot enumerate."""


@dataclass(frozen=True)
class SsspState:
    """Single-source shortest-path record.

    dist and sigma cover every node (inf / 0 when unreachable); preds is
    the full predecessor DAG with all ties; delta holds the accumulated
    dependency of the source on each node (all-targets, endpoints
    excluded); settled_order lists reachable nodes in non-decreasing
    distance order.
    """

    source: int
    dist: np.ndarray
    sigma: np.ndarray
    preds: tuple[tuple[int, ...], ...]
    delta: np.ndarray
    settled_order: np.ndarray


def _filtered(g: Graph, edge_filter: Callable[[Edge], bool] | None) -> Graph:
    if edge_filter is None:
        return g
    return build_graph(g.node_count, [e for e in g.edges() if edge_filter(e)],
                       g.module_of)


def sssp_dijkstra(g: Graph, source: int,
                  edge_filter: Callable[[Edge], bool] | None = None) -> SsspState:
    """Shortest paths from one source with counts, DAG, and dependencies."""
    if not (0 <= source < g.node_count):
        raise GraphError(f"source {source} out of range")
    sub = _filtered(g, edge_filter)
    dist, sigma, order = _kernels._sssp_single(sub.indptr, sub.indices,
                                               sub.weights, source)

    preds: list[tuple[int, ...]] = [()] * g.node_count
    for v in order:
        v = int(v)
        if v == source:
            continue
        dv = dist[v]
        ps = [int(u) for u, w in sub.adjacency(v)
              if dist[u] < dv and close(dist[u] + w, dv)]
        preds[v] = tuple(ps)

    delta = np.zeros(g.node_count)
    for w in order[::-1]:
        w = int(w)
        coef = ((0.0 if w == source else 1.0) + delta[w]) / sigma[w]
        for u in preds[w]:
            delta[u] += sigma[u] * coef
    delta[source] = 0.0

    return SsspState(source=source, dist=dist, sigma=sigma,
                     preds=tuple(preds), delta=delta, settled_order=order)


def blocked_sum(n: int, sources: np.ndarray, threads: int,
                run_block: Callable[[np.ndarray, np.ndarray], None]) -> np.ndarray:
    """Run run_block(chunk, partial) per source chunk; sum partials in order."""
    chunks = [sources[i:i + BLOCK] for i in range(0, len(sources), BLOCK)]
    out = np.zeros(n)

    def task(chunk: np.ndarray) -> np.ndarray:
        part = np.zeros(n)
        run_block(chunk, part)
        return part

    if threads <= 1 or len(chunks) <= 1:
        parts: Iterable[np.ndarray] = (task(c) for c in chunks)
        for part in parts:
            out += part
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            futures = [ex.submit(task, c) for c in chunks]
            for fut in futures:
                out += fut.result()
    return out


def brandes_bc(g: Graph, *,
               edge_filter: Callable[[Edge], bool] | None = None,
               pair_filter=None,
               threads: int = 1) -> CentralityVector:
    """Exact betweenness over ordered pairs.

    edge_filter restricts the metric to a subgraph; pair_filter restricts
    which ordered (source, target) pairs are counted: None, the strings
    "cross-module" / "within-module", or an arbitrary (s, t) predicate.
    """
    sub = _filtered(g, edge_filter)
    n = g.node_count
    sources = np.arange(n, dtype=np.int64)

    if pair_filter in _PAIR_MODES:
        mode = _PAIR_MODES[pair_filter]

        def run(chunk: np.ndarray, part: np.ndarray) -> None:
            _kernels._brandes_block(sub.indptr, sub.indices, sub.weights,
                                    g.module_of, chunk, mode, part)
    elif callable(pair_filter):
        def run(chunk: np.ndarray, part: np.ndarray) -> None:
            for s in chunk:
                s = int(s)
                tmask = np.fromiter((1 if (t != s and pair_filter(s, t)) else 0
                                     for t in range(n)), np.uint8, n)
                _kernels._brandes_masked_source(sub.indptr, sub.indices,
                                                sub.weights, s, tmask, part)
    else:
        raise GraphError(f"unsupported pair_filter {pair_filter!r}")

    scores = blocked_sum(n, sources, threads, run)
    return CentralityVector("BC", scores)


# -- brute-force oracle ----------------------------------------------------

def brute_force_bc(g: Graph, *, pairs: str = "all") -> CentralityVector:
    """Betweenness by explicit enumeration of every shortest path.

    All-pairs distances via Floyd-Warshall, then a recursive walk listing
    each ordered pair's shortest paths and crediting interior nodes with
    1/sigma each.  Deliberately shares no code with the compiled route.
    """
    n = g.node_count
    if n > 64:
        raise GraphTooLarge(f"brute-force oracle capped at 64 nodes, got {n}")
    if pairs not in ("all", "cross-module", "within-module"):
        raise GraphError(f"unsupported pairs selector {pairs!r}")

    inf = math.inf
    dist = [[inf] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = 0.0
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for e in g.edges():
        dist[e.u][e.v] = e.weight
        dist[e.v][e.u] = e.weight
        adj[e.u].append((e.v, e.weight))
        adj[e.v].append((e.u, e.weight))
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd

    def all_paths(s: int, t: int) -> list[list[int]]:
        if s == t:
            return [[t]]
        out = []
        for u, w in adj[s]:
            if dist[u][t] < inf and close(w + dist[u][t], dist[s][t]):
                for tail in all_paths(u, t):
                    out.append([s] + tail)
        return out

    mod = g.module_of
    bc = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t or dist[s][t] == inf:
                continue
            if pairs == "cross-module" and mod[s] == mod[t]:
                continue
            if pairs == "within-module" and mod[s] != mod[t]:
                continue
            paths = all_paths(s, t)
            share = 1.0 / len(paths)
            for path in paths:
                for v in path[1:-1]:
                    bc[v] += share

    return CentralityVector("BC", np.array(bc))
