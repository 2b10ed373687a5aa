"""Synthetic modular graph generator.

Graphs are built module by module: a uniform random attachment tree keeps
each module connected, extra internal edges are added up to the requested
density, and modules are wired together along a random quotient tree with
1 + Poisson(rate - 1) external edges per adjacent module pair.  All draws
come from one ``random.Random(seed)``, so a config reproduces its graph
byte for byte across runs and platforms.

With ``enforce_p=True`` external edges are drawn strictly heavier than the
largest internal module diameter.  Any same-module detour through another
module would then cross two such edges and lose, so every same-module
shortest path stays inside its module, with no external ties; this is the
regime in which local + external centrality reproduces exact betweenness.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass

from .graph import Edge, Graph, build_graph


class InvalidConfig(ValueError):
    """Generator parameters out of range."""


def resolve_module_count(rule: str | int, n: int) -> int:
    """Turn a module rule ("sqrt", "hundredth", or explicit count) into k."""
    if isinstance(rule, bool):
        raise InvalidConfig("module rule must be 'sqrt', 'hundredth' or an int")
    if isinstance(rule, int):
        if not 1 <= rule <= n:
            raise InvalidConfig(f"module count {rule} not in 1..{n}")
        return rule
    if rule == "sqrt":
        return max(1, math.isqrt(n))
    if rule == "hundredth":
        return max(1, n // 100)
    raise InvalidConfig(f"unknown module rule {rule!r}")


@dataclass(frozen=True)
class GenConfig:
    n: int
    module_rule: str | int = "sqrt"
    internal_density: float = 0.5
    external_edges_per_module_pair: float = 2.0
    weight_range: tuple[int, int] = (10, 50)
    seed: int = 0
    enforce_p: bool = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 4:
            raise InvalidConfig("n must be an integer >= 4")
        resolve_module_count(self.module_rule, self.n)
        if not 0.0 <= self.internal_density <= 1.0:
            raise InvalidConfig("internal_density must lie in [0, 1]")
        if self.external_edges_per_module_pair < 1.0:
            raise InvalidConfig("external_edges_per_module_pair must be >= 1 "
                                "(adjacent modules always get one edge)")
        lo, hi = self.weight_range
        if not (isinstance(lo, int) and isinstance(hi, int) and 1 <= lo <= hi):
            raise InvalidConfig("weight_range must be integers with 1 <= lo <= hi")

    @property
    def module_count(self) -> int:
        return resolve_module_count(self.module_rule, self.n)


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth's product-of-uniforms method; lam stays small here (~1)
    if lam <= 0.0:
        return 0
    limit = math.exp(-lam)
    k, prod = 0, 1.0
    while True:
        prod *= rng.random()
        if prod <= limit:
            return k
        k += 1


def _diameter(adj: list[list[tuple[int, float]]]) -> float:
    """Largest finite shortest-path distance within one module."""
    worst = 0.0
    size = len(adj)
    for s in range(size):
        dist = [math.inf] * size
        dist[s] = 0.0
        heap = [(0.0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for d in dist:
            if math.isfinite(d) and d > worst:
                worst = d
    return worst


def generate(cfg: GenConfig) -> Graph:
    """Build a modular graph from the config; same config, same graph.

    Module sizes are balanced (n mod k modules get one extra node) and ids
    are contiguous per module.  Internal edge count per module is
    max(size - 1, round(density * C(size, 2))).
    """
    rng = random.Random(cfg.seed)
    n, k = cfg.n, cfg.module_count
    lo, hi = cfg.weight_range
    base, rem = divmod(n, k)
    sizes = [base + (1 if i < rem else 0) for i in range(k)]
    offsets = [0] * k
    for i in range(1, k):
        offsets[i] = offsets[i - 1] + sizes[i - 1]
    module_of = [0] * n
    for i in range(k):
        for j in range(sizes[i]):
            module_of[offsets[i] + j] = i

    edges: list[Edge] = []
    module_adj: list[list[list[tuple[int, float]]]] = []
    for i in range(k):
        start, size = offsets[i], sizes[i]
        local: list[tuple[int, int]] = []
        used: set[tuple[int, int]] = set()
        for j in range(1, size):
            parent = rng.randrange(j)
            local.append((parent, j))
            used.add((parent, j))
        cap = size * (size - 1) // 2
        needed = max(size - 1, round(cfg.internal_density * cap)) - len(local)
        if needed > 0:
            if cfg.internal_density <= 0.55:
                # occupancy stays low enough for rejection sampling
                while needed:
                    u, v = rng.randrange(size), rng.randrange(size)
                    if u == v:
                        continue
                    pair = (u, v) if u < v else (v, u)
                    if pair in used:
                        continue
                    used.add(pair)
                    local.append(pair)
                    needed -= 1
            else:
                cands = [(u, v) for u in range(size)
                         for v in range(u + 1, size) if (u, v) not in used]
                rng.shuffle(cands)
                local.extend(cands[:needed])
        adj: list[list[tuple[int, float]]] = [[] for _ in range(size)]
        for u, v in local:
            w = float(rng.randint(lo, hi))
            edges.append(Edge(start + u, start + v, w))
            adj[u].append((v, w))
            adj[v].append((u, w))
        module_adj.append(adj)

    heavy = 0.0
    if cfg.enforce_p and k > 1:
        heavy = max(_diameter(adj) for adj in module_adj) + 1.0

    ext_used: set[tuple[int, int]] = set()
    for b in range(1, k):
        a = rng.randrange(b)
        count = 1 + _poisson(rng, cfg.external_edges_per_module_pair - 1.0)
        count = min(count, sizes[a] * sizes[b])
        made = 0
        while made < count:
            u = offsets[a] + rng.randrange(sizes[a])
            v = offsets[b] + rng.randrange(sizes[b])
            pair = (u, v) if u < v else (v, u)
            if pair in ext_used:
                continue
            ext_used.add(pair)
            if cfg.enforce_p and k > 1:
                w = heavy + rng.randrange(hi - lo + 1)
            else:
                w = float(rng.randint(lo, hi))
            edges.append(Edge(pair[0], pair[1], w))
            made += 1

    meta = {
        "generator": "modcent-synth",
        "n": str(n),
        "modules": str(k),
        "module_rule": str(cfg.module_rule),
        "internal_density": repr(cfg.internal_density),
        "external_edges_per_module_pair": repr(cfg.external_edges_per_module_pair),
        "weight_range": f"{lo}..{hi}",
        "seed": str(cfg.seed),
        "enforce_p": str(cfg.enforce_p).lower(),
    }
    return build_graph(n, edges, module_of, meta)
