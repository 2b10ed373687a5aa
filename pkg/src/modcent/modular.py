"""Module-decomposed betweenness: local, external, and global centrality.

The decomposition splits each node's betweenness by pair class:

* local centrality (LC) counts ordered pairs inside the node's module,
  over internal edges only, as one independent Brandes run per module.
* external centrality (EC) counts ordered pairs whose endpoints lie in
  different modules, over the full-graph metric.  Rather than running
  Dijkstra over all n nodes per source, each source searches a skeleton:
  the external (boundary) vertices joined by precomputed intra-module
  segments and by external edges.  Dependencies accumulate over the
  skeleton and are pushed down into module interiors.

GC = LC + EC.  When every shortest path between same-module nodes stays
inside that module (precondition P, testable via
:func:`validate_precondition`), GC equals exact full-graph betweenness.
The EC pair class itself is computed over the true metric regardless of P,
because any path decomposes at the external vertices it visits; P is only
needed for LC to cover the within-module pair class exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .exact import blocked_sum
from .graph import (
    CentralityVector,
    Edge,
    Graph,
    GraphError,
    ModulePartition,
    build_graph,
    classify_edges,
    close,
)


class PreconditionViolated(GraphError):
    """A same-module pair has a shortest path leaving the module."""


class _Pack:
    """Packed arrays shared by the local and cross-module passes.

    Rows of rdist/rsig/rred/rord are per external vertex ("root"), sized to
    the root's module and indexed by local node position; rord holds the
    internal Dijkstra settlement order as global ids.  rred carries the
    reduced segment counts (see _kernels._reduced_counts).
    """

    __slots__ = ("n", "mod_of", "local_of", "is_ext", "i_indptr", "i_indices",
                 "i_weights", "roots_g", "ext_mod", "ext_off", "ext_pos_of",
                 "root_off", "rdist", "rsig", "rred", "rord", "rcnt",
                 "x_indptr", "x_indices", "x_weights", "max_ext", "filled")

    def __init__(self, g: Graph, p: ModulePartition):
        n = g.node_count
        k = p.module_count
        self.n = n
        self.mod_of = g.module_of

        local_of = np.zeros(n, dtype=np.int64)
        for members in p.members:
            for j, v in enumerate(members):
                local_of[v] = j
        self.local_of = local_of

        internal = build_graph(
            n, [e for es in p.internal_edges for e in es], g.module_of)
        self.i_indptr = internal.indptr
        self.i_indices = internal.indices
        self.i_weights = internal.weights

        roots: list[int] = []
        ext_off = np.zeros(k + 1, dtype=np.int64)
        for i in range(k):
            roots.extend(p.external_vertices[i])
            ext_off[i + 1] = len(roots)
        self.roots_g = np.array(roots, dtype=np.int64)
        self.ext_off = ext_off
        self.ext_mod = g.module_of[self.roots_g] if roots else np.zeros(0, np.int64)
        ext_pos_of = np.full(n, -1, dtype=np.int64)
        ext_pos_of[self.roots_g] = np.arange(len(roots), dtype=np.int64)
        self.ext_pos_of = ext_pos_of
        self.is_ext = (ext_pos_of >= 0).astype(np.uint8)
        self.max_ext = int((ext_off[1:] - ext_off[:-1]).max()) if k else 0

        widths = np.array([len(p.members[m]) for m in self.ext_mod], dtype=np.int64)
        root_off = np.zeros(len(roots) + 1, dtype=np.int64)
        np.cumsum(widths, out=root_off[1:])
        self.root_off = root_off
        total = int(root_off[-1])
        self.rdist = np.full(total, np.inf)
        self.rsig = np.zeros(total)
        self.rred = np.zeros(total)
        self.rord = np.zeros(total, dtype=np.int64)
        self.rcnt = np.zeros(len(roots), dtype=np.int64)

        # external-edge adjacency over root positions
        arcs: list[tuple[int, int, float]] = []
        for e, _, _ in p.external_edges:
            pu, pv = int(ext_pos_of[e.u]), int(ext_pos_of[e.v])
            arcs.append((pu, pv, e.weight))
            arcs.append((pv, pu, e.weight))
        arcs.sort()
        x_indptr = np.zeros(len(roots) + 1, dtype=np.int64)
        self.x_indices = np.array([b for _, b, _ in arcs], dtype=np.int64)
        self.x_weights = np.array([w for _, _, w in arcs])
        for a, _, _ in arcs:
            x_indptr[a + 1] += 1
        np.cumsum(x_indptr, out=x_indptr)
        self.x_indptr = x_indptr
        self.filled = False


@dataclass(eq=False)
class ModuleSummary:
    """Per-module record of the local pass, reused by the cross-module pass.

    to_ext_dist[i, j] is the intra-module shortest distance from the i-th
    module node (ascending id order) to the j-th external vertex; entries
    are inf where the internal subgraph is disconnected.  to_ext_sigma is
    the matching path count; to_ext_reduced counts only the paths whose
    interiors avoid other external vertices (the counts the skeleton arcs
    compose from).
    """

    module: int
    nodes: np.ndarray
    external_vertices: np.ndarray
    _pack: _Pack = field(repr=False)

    def _matrix(self, flat: np.ndarray) -> np.ndarray:
        pk = self._pack
        cols = [flat[pk.root_off[q]:pk.root_off[q + 1]]
                for q in range(pk.ext_off[self.module], pk.ext_off[self.module + 1])]
        if not cols:
            return np.zeros((len(self.nodes), 0))
        return np.stack(cols, axis=1)

    @cached_property
    def to_ext_dist(self) -> np.ndarray:
        return self._matrix(self._pack.rdist)

    @cached_property
    def to_ext_sigma(self) -> np.ndarray:
        return self._matrix(self._pack.rsig)

    @cached_property
    def to_ext_reduced(self) -> np.ndarray:
        return self._matrix(self._pack.rred)

    def local_dag(self, ext_vertex: int) -> dict[int, tuple[int, ...]]:
        """Intra-module shortest-path predecessor DAG rooted at ext_vertex."""
        pk = self._pack
        q = int(pk.ext_pos_of[ext_vertex])
        if q < 0 or pk.ext_mod[q] != self.module:
            raise GraphError(f"{ext_vertex} is not an external vertex of "
                             f"module {self.module}")
        base = pk.root_off[q]
        dag: dict[int, tuple[int, ...]] = {}
        for j in range(int(pk.rcnt[q])):
            v = int(pk.rord[base + j])
            dv = pk.rdist[base + pk.local_of[v]]
            ps = []
            for ei in range(pk.i_indptr[v], pk.i_indptr[v + 1]):
                u = int(pk.i_indices[ei])
                du = pk.rdist[base + pk.local_of[u]]
                if du < dv and close(du + pk.i_weights[ei], dv):
                    ps.append(u)
            dag[v] = tuple(ps)
        return dag

    @cached_property
    def local_dags(self) -> dict[int, dict[int, tuple[int, ...]]]:
        return {int(x): self.local_dag(int(x)) for x in self.external_vertices}


@dataclass(frozen=True)
class EgressChoice:
    """Cheapest exit from a node's module: intra-module distance to an
    external vertex plus one external edge.  Infinite when the module has
    no external edges."""

    node: int
    egress_cost: float
    egress_edge: Edge | None


@dataclass(eq=False)
class GlobalCentralityReport:
    lc: CentralityVector
    ec: CentralityVector
    gc: CentralityVector
    ec_module: np.ndarray
    global_central_node: int
    global_central_module: int
    summaries: list[ModuleSummary]
    egress: list[EgressChoice]


def local_centrality(g: Graph, p: ModulePartition | None = None, *,
                     threads: int = 1) -> tuple[CentralityVector, list[ModuleSummary]]:
    """Per-module Brandes over internal edges; fills the module summaries.

    The same Dijkstra runs serve both outputs: sources that are external
    vertices have their distance/count/order arrays captured for the
    cross-module pass, so no pass is ever repeated.
    """
    if p is None:
        p = classify_edges(g)
    pack = _Pack(g, p)
    n = g.node_count
    sources = np.arange(n, dtype=np.int64)

    def run(chunk: np.ndarray, part: np.ndarray) -> None:
        _kernels._lc_block(pack.i_indptr, pack.i_indices, pack.i_weights,
                           chunk, part, pack.ext_pos_of, pack.root_off,
                           pack.local_of, pack.rdist, pack.rsig, pack.rord,
                           pack.rcnt)

    scores = blocked_sum(n, sources, threads, run)
    if len(pack.roots_g):
        _kernels._reduced_counts(pack.i_indptr, pack.i_indices, pack.i_weights,
                                 pack.roots_g, pack.is_ext, pack.root_off,
                                 pack.local_of, pack.rdist, pack.rord,
                                 pack.rcnt, pack.rred)
    pack.filled = True

    summaries = [ModuleSummary(module=i,
                               nodes=np.array(p.members[i], dtype=np.int64),
                               external_vertices=np.array(p.external_vertices[i],
                                                          dtype=np.int64),
                               _pack=pack)
                 for i in range(p.module_count)]
    return CentralityVector("LC", scores), summaries


def egress_paths(p: ModulePartition, summaries: list[ModuleSummary],
                 g: Graph) -> list[EgressChoice]:
    """Cheapest module exit per node: min over external edges (x, y) with x
    in the node's module of d_module(node, x) + w(x, y)."""
    if not summaries:
        return []
    pack = summaries[0]._pack
    out: list[EgressChoice] = [EgressChoice(v, math.inf, None)
                               for v in range(g.node_count)]
    candidates: list[list[tuple[int, Edge]]] = [[] for _ in range(p.module_count)]
    for e, mi, mj in p.external_edges:
        candidates[mi].append((e.u, e))
        candidates[mj].append((e.v, e))
    for i in range(p.module_count):
        cands = sorted(candidates[i], key=lambda c: (c[0], c[1]))
        if not cands:
            continue
        for v in p.members[i]:
            best = math.inf
            best_edge = None
            for x, e in cands:
                q = pack.ext_pos_of[x]
                d = pack.rdist[pack.root_off[q] + pack.local_of[v]]
                cost = d + e.weight
                if cost < best:
                    best = cost
                    best_edge = e
            out[v] = EgressChoice(v, best, best_edge)
    return out


def cross_module_dependencies(g: Graph, p: ModulePartition | None = None,
                              summaries: list[ModuleSummary] | None = None, *,
                              threads: int = 1,
                              validate: bool = False,
                              validate_samples: int | None = None,
                              seed: int = 0) -> CentralityVector:
    """External centrality: dependencies of all cross-module ordered pairs.

    Computed over the skeleton of external vertices; equals
    brandes_bc(pair_filter="cross-module") on any input.  With validate=True
    the precondition-P check runs first and raises PreconditionViolated.
    """
    if p is None:
        p = classify_edges(g)
    if summaries is None:
        _, summaries = local_centrality(g, p, threads=threads)
    if validate:
        validate_precondition(g, p, samples=validate_samples, seed=seed)
    n = g.node_count
    if n == 0 or not summaries:
        return CentralityVector("EC", np.zeros(n))
    pack = summaries[0]._pack
    if not pack.filled:
        raise GraphError("summaries were not produced by local_centrality")
    np_ext = len(pack.roots_g)
    if np_ext == 0:
        return CentralityVector("EC", np.zeros(n))

    aux_cap = int(np_ext * pack.max_ext + len(pack.x_indices) + pack.max_ext + 4)
    sources = np.arange(n, dtype=np.int64)

    def run(chunk: np.ndarray, part: np.ndarray) -> None:
        _kernels._skeleton_block(pack.i_indptr, pack.i_indices, pack.i_weights,
                                 pack.mod_of, pack.local_of, pack.is_ext,
                                 pack.roots_g, pack.ext_mod, pack.ext_off,
                                 pack.ext_pos_of, pack.root_off, pack.rdist,
                                 pack.rred, pack.rord, pack.rcnt,
                                 pack.x_indptr, pack.x_indices, pack.x_weights,
                                 chunk, max(pack.max_ext, 1), aux_cap, part)

    scores = blocked_sum(n, sources, threads, run)
    return CentralityVector("EC", scores)


def validate_precondition(g: Graph, p: ModulePartition | None = None, *,
                          samples: int | None = None, seed: int = 0) -> int:
    """Check precondition P: for same-module pairs, full-graph and
    intra-module shortest paths agree in both distance and count.

    samples=None checks every source; otherwise that many sources are
    drawn without replacement (seeded).  Returns the number of sources
    checked; raises PreconditionViolated on the first offending pair.
    """
    if p is None:
        p = classify_edges(g)
    n = g.node_count
    internal = build_graph(n, [e for es in p.internal_edges for e in es],
                           g.module_of)
    if samples is None or samples >= n:
        src = range(n)
    else:
        src = sorted(random.Random(seed).sample(range(n), samples))
    checked = 0
    for s in src:
        fdist, fsig, _ = _kernels._sssp_single(g.indptr, g.indices, g.weights, s)
        idist, isig, _ = _kernels._sssp_single(internal.indptr, internal.indices,
                                               internal.weights, s)
        for t in p.members[int(g.module_of[s])]:
            if t == s:
                continue
            if not close(fdist[t], idist[t]):
                raise PreconditionViolated(
                    f"pair ({s}, {t}) in module {int(g.module_of[s])}: "
                    f"full-graph distance {fdist[t]} < intra-module "
                    f"distance {idist[t]}")
            if math.isfinite(fdist[t]) and fsig[t] != isig[t]:
                raise PreconditionViolated(
                    f"pair ({s}, {t}) in module {int(g.module_of[s])}: "
                    f"{fsig[t]:.0f} shortest paths in the full graph but "
                    f"{isig[t]:.0f} inside the module (an external route ties)")
        checked += 1
    return checked


def global_centrality(g: Graph, p: ModulePartition | None = None, *,
                      threads: int = 1, validate: bool = False,
                      validate_samples: int | None = None,
                      seed: int = 0) -> GlobalCentralityReport:
    """LC + EC with per-module EC totals and the argmax node/module.

    ec_module[i] sums EC over module i's external vertices; ties in either
    argmax resolve to the smallest index.
    """
    if g.node_count == 0:
        raise GraphError("graph has no nodes, so no central node exists")
    if p is None:
        p = classify_edges(g)
    lc, summaries = local_centrality(g, p, threads=threads)
    egress = egress_paths(p, summaries, g)
    ec = cross_module_dependencies(g, p, summaries, threads=threads,
                                   validate=validate,
                                   validate_samples=validate_samples, seed=seed)
    gc = CentralityVector("GC", lc.scores + ec.scores)
    ec_module = np.array([float(ec.scores[list(p.external_vertices[i])].sum())
                          if p.external_vertices[i] else 0.0
                          for i in range(p.module_count)])
    return GlobalCentralityReport(
        lc=lc, ec=ec, gc=gc, ec_module=ec_module,
        global_central_node=gc.argmax(),
        global_central_module=int(np.argmax(ec_module)) if len(ec_module) else 0,
        summaries=summaries, egress=egress)
