import pytest
from hypothesis import given, settings, strategies as st

from indsetlab.graph import (
    Graph, GraphError, GraphParseError, VertexSet, complete_graph, connected_graphs, count_independent_sets,
    cycle_graph, edgeless_graph, enumerate_independent_sets, format_graph, independent_masks, is_independent,
    load_graph, parse_graph, path_graph, prefix_graph, random_bounded_degree_graph,
)


def brute_count(g):
    n = g.num_vertices
    return sum(1 for mask in range(1 << n)
               if all(not (mask >> u & 1 and mask >> v & 1) for u, v in g.edges))


class TestParse:
    def test_round_trip(self):
        text = "4 3\n0 1\n2 1\n3 0\n"
        g = parse_graph(text)
        assert g.edges == ((0, 1), (2, 1), (3, 0))
        assert format_graph(g) == text

    def test_comments_and_blanks(self):
        g = parse_graph("# P3\n\n3 2\n0 1\n# middle\n1 2\n")
        assert g.m == 2

    @pytest.mark.parametrize("text,line", [
        ("3 2\n0 1\n", 3),
        ("3 1\n0 0\n", 2),
        ("3 2\n0 1\n1 0\n", 3),
        ("3 1\n0 3\n", 2),
        ("3\n", 1),
        ("x y\n", 1),
        ("3 1\n0 a\n", 2),
        ("", 1),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphParseError) as err:
            parse_graph(text)
        assert err.value.line == line
        assert str(err.value).startswith(f"line {line}:")

    def test_load(self, tmp_path):
        p = tmp_path / "g.el"
        p.write_text("2 1\n0 1\n")
        assert load_graph(p) == Graph(2, ((0, 1),))


class TestGraph:
    def test_invariants(self):
        with pytest.raises(GraphError):
            Graph(2, ((0, 0),))
        with pytest.raises(GraphError):
            Graph(2, ((0, 1), (1, 0)))
        with pytest.raises(GraphError):
            Graph(2, ((0, 2),))
        with pytest.raises(GraphError):
            Graph(0)

    def test_prefix(self):
        g = path_graph(4)
        assert prefix_graph(g, 0).m == 0
        assert prefix_graph(g, 2).edges == ((0, 1), (1, 2))
        assert prefix_graph(g, 3) is g
        with pytest.raises(ValueError):
            prefix_graph(g, 4)

    def test_degrees(self):
        g = Graph(4, ((0, 1), (0, 2)))
        assert g.degrees == (2, 1, 1, 0)
        assert g.isolated_vertices == (3,)
        assert g.max_degree == 2

    def test_vertex_set(self):
        s = VertexSet.of([0, 2], 3)
        assert 2 in s and 1 not in s and len(s) == 2
        assert repr(s) == "{0,2}"
        assert s.toggle(1).bits == 0b111
        with pytest.raises(ValueError):
            VertexSet.of([3], 3)
        with pytest.raises(ValueError):
            is_independent(path_graph(3), VertexSet(0, 2))


class TestOracle:
    def test_known_counts(self):
        assert count_independent_sets(edgeless_graph(5)) == 32
        assert count_independent_sets(path_graph(3)) == 5
        assert count_independent_sets(cycle_graph(4)) == 7
        assert count_independent_sets(complete_graph(4)) == 5
        assert count_independent_sets(cycle_graph(5)) == 11

    def test_numeric_order(self):
        masks = independent_masks(path_graph(4))
        assert masks == sorted(masks)
        assert [s.bits for s in enumerate_independent_sets(path_graph(2))] == [0, 1, 2]

    def test_limit(self):
        with pytest.raises(ValueError):
            independent_masks(edgeless_graph(21))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9), st.integers(0, 4), st.integers(0, 2 ** 32))
    def test_matches_brute_force(self, n, d, seed):
        g = random_bounded_degree_graph(n, d, seed)
        assert g.max_degree <= d
        assert count_independent_sets(g) == brute_count(g)
        assert all(is_independent(g, s) for s in enumerate_independent_sets(g))

    def test_connected_graph_classes(self):
        # Connected graphs up to isomorphism on 1..5 vertices.
        assert [len(connected_graphs(n)) for n in range(1, 6)] == [1, 1, 2, 6, 21]
        assert all(g.is_connected() for g in connected_graphs(4))
