"""Synthetic graph generator: shape, determinism, and config validation."""

import math
import statistics

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import modcent as mc
from modcent import GenConfig, InvalidConfig


class TestResolveModuleCount:
    def test_sqrt(self):
        assert mc.resolve_module_count("sqrt", 100) == 10
        assert mc.resolve_module_count("sqrt", 99) == 9
        assert mc.resolve_module_count("sqrt", 4) == 2

    def test_hundredth(self):
        assert mc.resolve_module_count("hundredth", 1000) == 10
        assert mc.resolve_module_count("hundredth", 250) == 2
        # floors to zero below 100; clamps to a single module
        assert mc.resolve_module_count("hundredth", 99) == 1

    def test_explicit_count(self):
        assert mc.resolve_module_count(5, 50) == 5
        assert mc.resolve_module_count(1, 4) == 1
        assert mc.resolve_module_count(50, 50) == 50

    @pytest.mark.parametrize("rule", [0, -1, 51, True, False, "cbrt", "Sqrt"])
    def test_rejects(self, rule):
        with pytest.raises(InvalidConfig):
            mc.resolve_module_count(rule, 50)


class TestGenConfig:
    def test_defaults(self):
        cfg = GenConfig(n=100)
        assert cfg.module_rule == "sqrt"
        assert cfg.module_count == 10
        assert cfg.internal_density == 0.5
        assert cfg.external_edges_per_module_pair == 2.0
        assert cfg.weight_range == (10, 50)
        assert cfg.seed == 0
        assert cfg.enforce_p is False

    @pytest.mark.parametrize("kwargs", [
        dict(n=3),
        dict(n=4.5),
        dict(n="40"),
        dict(n=40, module_rule="cbrt"),
        dict(n=40, module_rule=0),
        dict(n=40, module_rule=41),
        dict(n=40, internal_density=-0.01),
        dict(n=40, internal_density=1.01),
        dict(n=40, external_edges_per_module_pair=0.99),
        dict(n=40, weight_range=(0, 5)),
        dict(n=40, weight_range=(5, 2)),
        dict(n=40, weight_range=(1.5, 3)),
    ])
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(InvalidConfig):
            GenConfig(**kwargs)

    def test_invalid_config_is_value_error(self):
        assert issubclass(InvalidConfig, ValueError)


class TestGenerate:
    def test_deterministic_per_seed(self):
        cfg = GenConfig(n=80, seed=12)
        a = mc.serialize_graph(mc.generate(cfg))
        b = mc.serialize_graph(mc.generate(cfg))
        assert a == b
        c = mc.serialize_graph(mc.generate(GenConfig(n=80, seed=13)))
        assert a != c

    def test_module_sizes_balanced_and_contiguous(self):
        g = mc.generate(GenConfig(n=1000, module_rule="hundredth"))
        counts = np.bincount(g.module_of)
        assert counts.tolist() == [100] * 10
        assert np.all(np.diff(g.module_of) >= 0)  # contiguous blocks

        g = mc.generate(GenConfig(n=50, module_rule="sqrt"))
        counts = np.bincount(g.module_of)
        assert sorted(counts.tolist()) == [7, 7, 7, 7, 7, 7, 8]
        assert counts[0] == 8  # the remainder lands on the first modules

    def test_connected(self):
        for seed in range(5):
            g = mc.generate(GenConfig(n=60, seed=seed))
            dist = mc.sssp_dijkstra(g, 0).dist
            assert np.all(np.isfinite(dist))

    @pytest.mark.parametrize("density", [0.0, 0.3, 0.5, 0.8, 1.0])
    def test_internal_edge_budget(self, density):
        g = mc.generate(GenConfig(n=40, module_rule=4,
                                  internal_density=density, seed=2))
        p = mc.classify_edges(g)
        for i in range(4):
            size = len(p.members[i])
            cap = size * (size - 1) // 2
            want = max(size - 1, round(density * cap))
            assert len(p.internal_edges[i]) == want

    def test_density_one_is_complete_modules(self):
        g = mc.generate(GenConfig(n=20, module_rule=2, internal_density=1.0))
        p = mc.classify_edges(g)
        assert len(p.internal_edges[0]) == 45
        assert len(p.internal_edges[1]) == 45

    def test_quotient_is_connected(self):
        for seed in range(5):
            g = mc.generate(GenConfig(n=60, module_rule=6, seed=seed))
            p = mc.classify_edges(g)
            assert len(p.external_edges) >= 5
            q = mc.quotient_graph(p, g)
            qdist = mc.sssp_dijkstra(q, 0).dist
            assert np.all(np.isfinite(qdist))

    def test_weights_are_integers_in_range(self):
        g = mc.generate(GenConfig(n=60, weight_range=(3, 9), seed=4))
        ws = [e.weight for e in g.edges()]
        assert all(w == int(w) for w in ws)
        assert all(3 <= w <= 9 for w in ws)

    def test_enforce_p_makes_external_edges_heavy(self):
        g = mc.generate(GenConfig(n=40, module_rule=4, seed=6,
                                  enforce_p=True))
        mod = g.module_of
        internal = mc.build_graph(
            g.node_count,
            [e for e in g.edges() if mod[e.u] == mod[e.v]],
            mod,
        )
        worst = 0.0
        for s in range(g.node_count):
            d = mc.sssp_dijkstra(internal, s).dist
            worst = max(worst, d[np.isfinite(d)].max())
        for e in g.edges():
            if mod[e.u] != mod[e.v]:
                assert e.weight > worst

    def test_enforce_p_single_module_is_fine(self):
        g = mc.generate(GenConfig(n=20, module_rule=1, enforce_p=True))
        assert mc.classify_edges(g).external_edges == ()
        assert mc.validate_precondition(g) == 20

    def test_external_edge_rate_matches_poisson_mean(self):
        # each of the k-1 adjacent module pairs draws 1 + Poisson(rate - 1)
        # edges; the mean over many seeds should sit near the rate
        rate = 2.0
        counts = []
        for seed in range(100):
            g = mc.generate(GenConfig(n=25, module_rule=5, seed=seed,
                                      external_edges_per_module_pair=rate))
            counts.append(len(mc.classify_edges(g).external_edges) / 4)
        mean = statistics.fmean(counts)
        # sd of the mean is 1/sqrt(400) = 0.05; allow four of those
        assert abs(mean - rate) < 0.2

    def test_rate_one_gives_spanning_tree_of_modules(self):
        for seed in range(10):
            g = mc.generate(GenConfig(n=30, module_rule=5, seed=seed,
                                      external_edges_per_module_pair=1.0))
            assert len(mc.classify_edges(g).external_edges) == 4

    @given(st.integers(4, 60), st.sampled_from([0.0, 0.4, 1.0]),
           st.integers(0, 30))
    def test_edge_count_bounds(self, n, density, seed):
        g = mc.generate(GenConfig(n=n, internal_density=density, seed=seed))
        m = len(list(g.edges()))
        assert n - 1 <= m <= n * (n - 1) // 2

    def test_meta_records_config(self):
        cfg = GenConfig(n=24, module_rule=3, internal_density=0.25,
                        weight_range=(2, 7), seed=99, enforce_p=True)
        g = mc.generate(cfg)
        assert g.meta == {
            "generator": "modcent-synth",
            "n": "24",
            "modules": "3",
            "module_rule": "3",
            "internal_density": "0.25",
            "external_edges_per_module_pair": "2.0",
            "weight_range": "2..7",
            "seed": "99",
            "enforce_p": "true",
        }

    def test_meta_survives_file_round_trip(self, tmp_path):
        g = mc.generate(GenConfig(n=24, seed=1))
        path = tmp_path / "g.graph"
        mc.save_graph(g, path)
        again = mc.load_graph(path)
        assert again.meta == g.meta
        assert mc.serialize_graph(again) == mc.serialize_graph(g)

    def test_minimum_size(self):
        g = mc.generate(GenConfig(n=4))
        assert g.node_count == 4
        assert np.bincount(g.module_of).tolist() == [2, 2]
        assert np.all(np.isfinite(mc.sssp_dijkstra(g, 0).dist))

    def test_explicit_module_count_n_modules(self):
        # one node per module: no internal edges at all
        g = mc.generate(GenConfig(n=6, module_rule=6))
        p = mc.classify_edges(g)
        assert all(edges == () for edges in p.internal_edges)
        assert len(p.external_edges) >= 5
