import io
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

import modcent as mc
from modcent.graph import (
    REL_TOL,
    close,
    parse_graph_file,
    serialize_graph,
    write_module_csv,
    write_node_csv,
)
from helpers import graph_from_seed


def p3():
    return mc.build_graph(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 0, 0])


def two_triangle():
    edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1),
             (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)]
    return mc.build_graph(6, edges, [0, 0, 0, 1, 1, 1])


class TestBuildGraph:
    def test_p3(self):
        g = p3()
        assert g.node_count == 3
        assert g.edge_count == 2
        assert g.adjacency(1) == [(0, 1.0), (2, 1.0)]

    def test_two_triangle(self):
        g = two_triangle()
        assert g.module_count == 2
        assert g.degree(2) == 3

    def test_adjacency_symmetric(self):
        g = graph_from_seed(99, n_lo=6, n_hi=12)
        for u in range(g.node_count):
            for v, w in g.adjacency(u):
                assert (u, w) in g.adjacency(v)

    def test_duplicate_edge(self):
        with pytest.raises(mc.DuplicateEdge):
            mc.build_graph(2, [(0, 1, 1), (1, 0, 2)], [0, 0])

    def test_self_loop(self):
        with pytest.raises(mc.SelfLoop):
            mc.build_graph(2, [(1, 1, 1)], [0, 0])

    @pytest.mark.parametrize("w", [0.0, -1.0, math.inf, math.nan])
    def test_bad_weight(self, w):
        with pytest.raises(mc.NonPositiveWeight):
            mc.build_graph(2, [(0, 1, w)], [0, 0])

    def test_dangling_node(self):
        with pytest.raises(mc.DanglingNodeId):
            mc.build_graph(2, [(0, 2, 1)], [0, 0])

    def test_noncontiguous_modules(self):
        with pytest.raises(mc.NonContiguousModules):
            mc.build_graph(3, [], [0, 2, 2])

    def test_edge_order_independence(self):
        edges = [(0, 1, 1), (1, 2, 2), (0, 2, 3), (2, 3, 1)]
        g1 = mc.build_graph(4, edges, [0, 0, 1, 1])
        rng = random.Random(5)
        for _ in range(10):
            shuffled = edges[:]
            rng.shuffle(shuffled)
            assert mc.build_graph(4, shuffled, [0, 0, 1, 1]) == g1

    def test_empty_graph(self):
        g = mc.build_graph(0, [], [])
        assert g.node_count == 0 and g.module_count == 0


class TestClose:
    def test_basic(self):
        assert close(1.0, 1.0 + 1e-15)
        assert not close(1.0, 1.0 + 1e-9)
        assert close(0.0, 0.0)

    def test_infinity_is_not_close_to_finite(self):
        # abs(inf - x) <= tol * inf would be True; the guard must kick in
        assert not close(math.inf, 1e300)
        assert close(math.inf, math.inf)

    def test_relative(self):
        big = 1e12
        assert close(big, big * (1 + REL_TOL / 2))
        assert not close(big, big * (1 + REL_TOL * 10))


class TestCentralityVector:
    def test_validates_measure(self):
        with pytest.raises(ValueError):
            mc.CentralityVector("XX", np.zeros(3))

    def test_rejects_meaningful_negative(self):
        with pytest.raises(ValueError):
            mc.CentralityVector("BC", np.array([1.0, -0.5]))

    def test_clamps_rounding_negative(self):
        cv = mc.CentralityVector("BC", np.array([1.0, -1e-13]))
        assert cv.scores[1] == 0.0

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            mc.CentralityVector("BC", np.array([np.inf]))

    def test_argmax_smallest_index_tie(self):
        cv = mc.CentralityVector("GC", np.array([3.0, 7.0, 7.0, 1.0]))
        assert cv.argmax() == 1

    def test_scores_immutable(self):
        cv = mc.CentralityVector("LC", np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            cv.scores[0] = 9.0


class TestClassifyEdges:
    def test_two_triangle(self):
        g = two_triangle()
        p = mc.classify_edges(g)
        assert [len(es) for es in p.internal_edges] == [3, 3]
        assert len(p.external_edges) == 1
        e, mi, mj = p.external_edges[0]
        assert (e.u, e.v, mi, mj) == (2, 3, 0, 1)
        assert p.external_vertices == ((2,), (3,))

    def test_single_module_degenerate(self):
        g = p3()
        p = mc.classify_edges(g)
        assert p.external_edges == ()
        assert p.external_vertices == ((),)
        assert len(p.internal_edges[0]) == 2

    @given(st.integers(0, 500))
    def test_partition_property(self, seed):
        g = graph_from_seed(seed, n_hi=14)
        p = mc.classify_edges(g)
        internal = {e.canonical() for es in p.internal_edges for e in es}
        external = {e.canonical() for e, _, _ in p.external_edges}
        assert internal.isdisjoint(external)
        assert len(internal) + len(external) == g.edge_count
        assert sum(len(m) for m in p.members) == g.node_count
        for i, vs in enumerate(p.external_vertices):
            for v in vs:
                assert g.module_of[v] == i
                assert any(g.module_of[u] != i for u, _ in g.adjacency(v))


class TestQuotient:
    def test_two_triangle(self):
        g = two_triangle()
        q = mc.quotient_graph(mc.classify_edges(g), g)
        assert q.node_count == 2
        assert list(q.edges()) == [mc.Edge(0, 1, 1.0)]

    def test_three_module_chain(self):
        g = mc.build_graph(6, [(0, 1, 1), (2, 3, 1), (4, 5, 1),
                               (1, 2, 1), (3, 4, 1)], [0, 0, 1, 1, 2, 2])
        q = mc.quotient_graph(mc.classify_edges(g), g)
        assert q.node_count == 3
        assert sorted((e.u, e.v) for e in q.edges()) == [(0, 1), (1, 2)]

    def test_parallel_edges_take_min_weight(self):
        g = mc.build_graph(4, [(0, 1, 5), (2, 3, 5), (0, 2, 30.0), (1, 3, 10.0)],
                           [0, 0, 1, 1])
        q = mc.quotient_graph(mc.classify_edges(g), g)
        assert list(q.edges()) == [mc.Edge(0, 1, 10.0)]

    @given(st.integers(0, 300))
    def test_quotient_shape(self, seed):
        g = graph_from_seed(seed, n_hi=12)
        p = mc.classify_edges(g)
        q = mc.quotient_graph(p, g)
        assert q.node_count == p.module_count
        assert {(e.u, e.v) for e in q.edges()} == set(p.module_pairs())


class TestFileFormat:
    def test_parse_minimal(self):
        g = parse_graph_file("n 0 0\nn 1 0\ne 0 1 2.5\n")
        assert g.node_count == 2
        assert g.adjacency(0) == [(1, 2.5)]

    def test_comments_and_blank_lines(self):
        g = parse_graph_file("# header\n\nn 0 0\nn 1 1\n# mid\ne 0 1 3\n")
        assert g.edge_count == 1 and g.module_count == 2

    def test_dangling_edge_node(self):
        with pytest.raises(mc.DanglingNodeId):
            parse_graph_file("n 0 0\nn 1 0\ne 0 5 1\n")

    def test_edge_before_nodes(self):
        with pytest.raises(mc.DanglingNodeId):
            parse_graph_file("e 0 1 1\nn 0 0\nn 1 0\n")

    def test_node_line_after_edges(self):
        with pytest.raises(mc.GraphSyntaxError) as ei:
            parse_graph_file("n 0 0\nn 1 0\ne 0 1 1\nn 2 0\n")
        assert ei.value.line == 4

    def test_gap_in_ids(self):
        with pytest.raises(mc.GraphSyntaxError):
            parse_graph_file("n 0 0\nn 2 0\ne 0 2 1\n")

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(mc.GraphSyntaxError) as ei:
            parse_graph_file("n 0 0\nn 1 0\ne 0 1\n")
        assert ei.value.line == 3
        assert "line 3" in str(ei.value)

    def test_bad_weight_text(self):
        with pytest.raises(mc.GraphSyntaxError):
            parse_graph_file("n 0 0\nn 1 0\ne 0 1 heavy\n")

    def test_fixture_files_load(self, fixtures_dir):
        for path in sorted(fixtures_dir.glob("*.graph")):
            g = mc.load_graph(path)
            assert g.node_count > 0

    @given(st.integers(0, 400))
    def test_round_trip(self, seed):
        g = graph_from_seed(seed, n_hi=16)
        assert parse_graph_file(serialize_graph(g)) == g

    def test_round_trip_fractional_weights(self):
        g = mc.build_graph(3, [(0, 1, 0.1), (1, 2, 1 / 3)], [0, 0, 0])
        g2 = parse_graph_file(serialize_graph(g))
        assert np.array_equal(g2.weights, g.weights)

    def test_meta_survives_serialization(self):
        g = mc.generate(mc.GenConfig(n=12, module_rule=3, seed=4))
        text = serialize_graph(g)
        assert "# seed: 4" in text
        assert parse_graph_file(text).meta == g.meta


class TestCsvWriters:
    def test_node_csv_schema_and_digits(self):
        g = p3()
        buf = io.StringIO()
        write_node_csv(buf, g, {"bc": np.array([0.0, 2.0, 1 / 3])})
        lines = buf.getvalue().splitlines()
        assert lines[0] == "node,module,bc"
        assert lines[1] == "0,0,0"
        assert lines[3] == "2,0,0.333333333"  # 9 significant digits

    def test_node_csv_scale(self):
        g = p3()
        buf = io.StringIO()
        write_node_csv(buf, g, {"bc": np.array([0.0, 2.0, 4.0])}, scale=0.5)
        assert buf.getvalue().splitlines()[2] == "1,0,1"

    def test_module_csv(self):
        buf = io.StringIO()
        write_module_csv(buf, [12.0, 0.5])
        assert buf.getvalue() == "module,ec_module\n0,12\n1,0.5\n"
