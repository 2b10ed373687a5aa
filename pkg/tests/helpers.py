"""Seeded random graph builders shared by oracle loops and property tests."""

import random

import modcent as mc


def random_graph(rng: random.Random, n_lo=2, n_hi=8, weights=(1, 2, 3),
                 max_modules=None):
    """Arbitrary small graph: random density, weights, and module labels.

    Density is drawn per graph (including 0: edgeless graphs are valid),
    module labels are random but re-packed to a contiguous 0..k-1 range.
    """
    n = rng.randint(n_lo, n_hi)
    k = rng.randint(1, max_modules or n)
    labels = [rng.randrange(k) for _ in range(n)]
    present = sorted(set(labels))
    remap = {m: i for i, m in enumerate(present)}
    module_of = [remap[m] for m in labels]
    density = rng.random()
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.append((u, v, float(rng.choice(weights))))
    return mc.build_graph(n, edges, module_of)


def random_tree(rng: random.Random, n_lo=2, n_hi=20, weights=(1, 2, 3, 5)):
    n = rng.randint(n_lo, n_hi)
    edges = [(rng.randrange(j), j, float(rng.choice(weights)))
             for j in range(1, n)]
    return mc.build_graph(n, edges, [0] * n)


def graph_from_seed(seed: int, **kwargs):
    return random_graph(random.Random(seed), **kwargs)
