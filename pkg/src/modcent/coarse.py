"""Coarse centrality: score nodes from the module quotient graph alone.

The quotient collapses each module to a single node, so its Brandes pass
costs O(k^2 log k) for k modules regardless of module sizes.  Node-level
external scores are then estimated combinatorially: a connector node v in
module A inherits credit for every module B that terminates a shortest
quotient route through one of v's minimum-weight external edges, scaled by
|A| * |B| (the pair count those modules contribute).  This trades the exact
per-pair accounting of the skeleton pass for a few microseconds of work,
and is meant for ranking, not for reproducing exact betweenness values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exact import brandes_bc
from .graph import (
    REL_TOL,
    CentralityVector,
    Graph,
    GraphError,
    ModulePartition,
    classify_edges,
    close,
    quotient_graph,
)
from .modular import local_centrality


@dataclass(eq=False)
class QuotientRoutes:
    """Shortest-route structure of the quotient graph.

    ``dist`` is the k-by-k module distance matrix.  ``endpoint_modules``
    maps each quotient edge (i, j), i < j, to the modules that appear as an
    endpoint of at least one shortest quotient route passing through it.
    """

    quotient: Graph
    dist: np.ndarray
    endpoint_modules: dict[tuple[int, int], frozenset[int]]


def _edge_usage(dist: np.ndarray, a: int, b: int, w: float) -> np.ndarray:
    # ordered pairs (X, Y) whose quotient distance is realized through a-b
    via_ab = dist[:, a][:, None] + (w + dist[b, :][None, :])
    via_ba = dist[:, b][:, None] + (w + dist[a, :][None, :])
    best = np.minimum(via_ab, via_ba)
    tol = REL_TOL * np.maximum(np.abs(best), np.abs(dist))
    with np.errstate(invalid="ignore"):  # inf - inf where unreachable
        used = np.isfinite(dist) & np.isfinite(best) & (np.abs(best - dist) <= tol)
    np.fill_diagonal(used, False)
    return used


def quotient_routes(q: Graph) -> QuotientRoutes:
    """Distances plus per-edge endpoint-module sets for a quotient graph."""
    k = q.node_count
    dist = np.full((k, k), np.inf)
    for s in range(k):
        d, _, _ = _kernels._sssp_single(q.indptr, q.indices, q.weights, s)
        dist[s] = d
    endpoint: dict[tuple[int, int], frozenset[int]] = {}
    for e in q.edges():
        used = _edge_usage(dist, e.u, e.v, e.weight)
        endpoint[(e.u, e.v)] = frozenset(np.flatnonzero(used.any(axis=1)).tolist())
    return QuotientRoutes(q, dist, endpoint)


def module_graph_bc(q: Graph) -> CentralityVector:
    """Betweenness of the quotient graph itself (ordered pairs)."""
    return brandes_bc(q)


def _incident_external(g: Graph, p: ModulePartition) -> list[list[tuple[float, int]]]:
    # per node: (weight, far module) for each incident external edge
    incident: list[list[tuple[float, int]]] = [[] for _ in range(g.node_count)]
    for e, mi, mj in p.external_edges:
        incident[e.u].append((e.weight, mj))
        incident[e.v].append((e.weight, mi))
    return incident


def node_ec_unweighted(g: Graph, p: ModulePartition,
                       routes: QuotientRoutes) -> CentralityVector:
    """|A| * sum(|B|) over modules B reached through v's realizer edges.

    A realizer edge at v is an external edge whose weight equals the (min)
    quotient weight of its module pair; tied connectors all receive full
    credit.  B ranges over the distinct endpoint modules, other than v's
    own, of shortest quotient routes crossing those edges.
    """
    ec = np.zeros(g.node_count)
    sizes = [len(m) for m in p.members]
    qw = {(e.u, e.v): e.weight for e in routes.quotient.edges()}
    for v, edges in enumerate(_incident_external(g, p)):
        if not edges:
            continue
        a = int(g.module_of[v])
        mods: set[int] = set()
        for w, b in edges:
            key = (a, b) if a < b else (b, a)
            if close(w, qw[key]):
                mods |= routes.endpoint_modules[key]
        mods.discard(a)
        ec[v] = sizes[a] * sum(sizes[b] for b in mods)
    return CentralityVector("EC", ec)


def node_ec_weighted(g: Graph, p: ModulePartition,
                     routes: QuotientRoutes) -> CentralityVector:
    """Like :func:`node_ec_unweighted` but credit is apportioned per edge,
    weighted by edge weight over the total external weight at the node."""
    ec = np.zeros(g.node_count)
    sizes = [len(m) for m in p.members]
    qw = {(e.u, e.v): e.weight for e in routes.quotient.edges()}
    for v, edges in enumerate(_incident_external(g, p)):
        if not edges:
            continue
        a = int(g.module_of[v])
        total_w = sum(w for w, _ in edges)
        acc = 0.0
        for w, b in edges:
            key = (a, b) if a < b else (b, a)
            if not close(w, qw[key]):
                continue
            le = sum(sizes[m] for m in routes.endpoint_modules[key] if m != a)
            acc += sizes[a] * le * w
        ec[v] = acc / total_w
    return CentralityVector("EC", ec)


@dataclass(eq=False)
class CoarseReport:
    module_bc: CentralityVector
    node_ec: CentralityVector
    ic: CentralityVector
    coarse_gc: CentralityVector
    coarse_central_node: int
    coarse_central_module: int
    module_ec: np.ndarray


def coarse_global(g: Graph, p: ModulePartition | None = None,
                  lc: CentralityVector | None = None, *,
                  weighted: bool = False, threads: int = 1) -> CoarseReport:
    """IC (= LC) plus estimated node EC, with module-level quotient BC.

    coarse_central_module maximizes the module's summed node EC over its
    external vertices, not quotient BC; ties take the smallest index.
    """
    if g.node_count == 0:
        raise GraphError("graph has no nodes, so no central node exists")
    if p is None:
        p = classify_edges(g)
    if lc is None:
        lc, _ = local_centrality(g, p, threads=threads)
    q = quotient_graph(p, g)
    routes = quotient_routes(q)
    node_ec = (node_ec_weighted if weighted else node_ec_unweighted)(g, p, routes)
    ic = CentralityVector("IC", lc.scores)
    gc = CentralityVector("GC", ic.scores + node_ec.scores)
    module_ec = np.array([
        float(node_ec.scores[list(p.external_vertices[i])].sum())
        if p.external_vertices[i] else 0.0
        for i in range(p.module_count)])
    return CoarseReport(
        module_bc=module_graph_bc(q), node_ec=node_ec, ic=ic, coarse_gc=gc,
        coarse_central_node=gc.argmax(),
        coarse_central_module=int(np.argmax(module_ec)) if len(module_ec) else 0,
        module_ec=module_ec)
