import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simine import (AttributedGraph, GraphFormatError, LoadOptions, load_graph,
                    save_graph)

from conftest import FIG_A, FIG_B, FIG_C, FIG_D, random_graph, write_dataset


def fig_files(tmp_path):
    attr_lines = ["id,a,b,c,d"]
    for i in range(11):
        attr_lines.append(f"{i},{FIG_A[i]},{FIG_B[i]},{FIG_C[i]},{FIG_D[i]}")
    edge_lines = ["# comment line", "0 1", "0 2", "2 3"]
    return write_dataset(tmp_path, edge_lines, attr_lines)


class TestLoad:
    def test_smallest_graph(self, tmp_path):
        e, a = write_dataset(tmp_path, ["x y"], ["id,b", "x,1", "y,0"])
        g = load_graph(e, a)
        assert g.n == 2 and g.m == 1
        assert g.vertex_label(0) == "x" and g.vertex_id("y") == 1

    def test_fig_attribute_kinds(self, tmp_path):
        g = load_graph(*fig_files(tmp_path))
        assert g.n == 11
        assert [c.name for c in g.columns] == ["a", "b", "c", "d"]
        assert g.column("a").kind == "numeric"
        assert all(g.column(x).kind == "nominal" for x in "bcd")
        assert g.m == 3  # comment line ignored

    def test_self_loop_rejected(self, tmp_path):
        e, a = write_dataset(tmp_path, ["3 3"], ["id,b", "1,0", "2,0", "3,0", "4,1"])
        with pytest.raises(GraphFormatError, match="self-loop"):
            load_graph(e, a)

    def test_directed_self_loop_dropped_when_enabled(self, tmp_path):
        e, a = write_dataset(tmp_path, ["1 1", "1 2"], ["id,b", "1,0", "2,1"])
        g = load_graph(e, a, LoadOptions(directed=True, allow_self_loops=True))
        assert g.m == 1

    def test_duplicate_edge_rejected(self, tmp_path):
        e, a = write_dataset(tmp_path, ["1 2", "2 1"], ["id,b", "1,0", "2,1"])
        with pytest.raises(GraphFormatError, match="duplicate"):
            load_graph(e, a)

    def test_unknown_label_rejected(self, tmp_path):
        e, a = write_dataset(tmp_path, ["1 9"], ["id,b", "1,0", "2,1"])
        with pytest.raises(GraphFormatError, match="unknown vertex label '9'"):
            load_graph(e, a)

    def test_ragged_attribute_row(self, tmp_path):
        e, a = write_dataset(tmp_path, ["1 2"], ["id,b,c", "1,0,1", "2,0"])
        with pytest.raises(GraphFormatError, match="ragged"):
            load_graph(e, a)

    def test_kind_override_and_missing(self, tmp_path):
        e, a = write_dataset(tmp_path, ["1 2"], ["id,b,x", "1,0,", "2,1,3.5", "3,0,NA"])
        g = load_graph(e, a, LoadOptions(kinds={"b": "nominal"}))
        assert g.column("x").kind == "numeric"
        assert np.isnan(g.column("x").values[0]) and np.isnan(g.column("x").values[2])

    def test_tab_delimiter_and_named_id_col(self, tmp_path):
        e, a = write_dataset(tmp_path, ["u v"],
                             ["b\tnode\tc", "1\tu\tx", "0\tv\ty"])
        g = load_graph(e, a, LoadOptions(delimiter="\t", id_column="node"))
        assert g.n == 2 and g.m == 1
        assert g.column("b").values[0] == "1"

    def test_roundtrip(self, tmp_path):
        g = load_graph(*fig_files(tmp_path))
        save_graph(g, tmp_path / "out.edges", tmp_path / "out.csv")
        g2 = load_graph(tmp_path / "out.edges", tmp_path / "out.csv")
        assert g2.n == g.n and g2.m == g.m
        assert np.array_equal(np.sort(g2.edges, axis=0), np.sort(g.edges, axis=0))
        for c1, c2 in zip(g.columns, g2.columns):
            assert c1.name == c2.name and c1.kind == c2.kind
            if c1.kind == "numeric":
                assert np.allclose(c1.values, c2.values, equal_nan=True)
            else:
                assert list(c1.values) == list(c2.values)


class TestCounting:
    def test_degree_triangle(self, triangle):
        assert [triangle.degree(u) for u in range(3)] == [2, 2, 2]

    def test_degree_path(self, path4):
        assert path4.degree(1) == 2 and path4.degree(0) == 1

    def test_degree_star_center(self, star5):
        assert star5.degree(0) == 4

    def test_degree_out_of_range(self, triangle):
        with pytest.raises(IndexError):
            triangle.degree(7)

    def test_directed_degrees(self):
        g = AttributedGraph(3, [(0, 1), (0, 2), (2, 0)], directed=True)
        assert g.degree(0, "out") == 2 and g.degree(0, "in") == 1
        assert g.degree(0) == 3

    def test_count_edges_between_triangle(self, triangle):
        assert triangle.count_edges_between([0, 1], [2]) == 2
        assert triangle.count_edges_between(range(3), range(3)) == triangle.m == 3

    def test_count_edges_whole_graph(self, fig_graph):
        v = list(range(fig_graph.n))
        assert fig_graph.count_edges_between(v, v) == fig_graph.m

    def test_count_edges_directed(self):
        g = AttributedGraph(3, [(0, 1), (1, 0), (1, 2)], directed=True)
        assert g.count_edges_between([0], [1]) == 1
        assert g.count_edges_between([1], [0]) == 1
        assert g.count_edges_between([0, 1], [2]) == 1

    def test_inter_edge_count(self, triangle, path4, fig_graph):
        assert fig_graph.inter_edge_count(range(fig_graph.n)) == 0
        assert triangle.inter_edge_count([0]) == 2
        assert path4.inter_edge_count([1, 2]) == 2  # edges 0-1 and 2-3

    def test_degree_sum_is_2m(self, fig_graph):
        assert fig_graph.degrees().sum() == 2 * fig_graph.m


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_counting_identities(seed, data):
    g = random_graph(seed)
    ids = np.arange(g.n)
    a_pick = data.draw(st.lists(st.integers(0, g.n - 1), unique=True))
    b_pick = data.draw(st.lists(st.integers(0, g.n - 1), unique=True))
    a = g.as_mask(a_pick)
    b = g.as_mask(b_pick)
    # symmetry
    assert g.count_edges_between(a, b) == g.count_edges_between(b, a)
    # within/inter/outside partition of the edge set
    comp = ~a
    assert (g.count_edges_between(a, a) + g.inter_edge_count(a)
            + g.count_edges_between(comp, comp)) == g.m
    assert g.degrees().sum() == 2 * g.m
    assert g.count_edges_between(ids, ids) == g.m
