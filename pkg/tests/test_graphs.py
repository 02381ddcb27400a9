import math

import pytest
from hypothesis import given, strategies as st

from qmcut.graphs import (
    GraphFormatError,
    WeightedGraph,
    edge_key,
    neighbors,
    normalize_weights,
    parse_graph,
    serialize_graph,
)


def test_parse_single_edge():
    g = parse_graph("n 2\n0 1 1.0")
    assert g.n == 2
    assert g.edges == ((0, 1, 1.0),)


def test_parse_path():
    g = parse_graph("n 3\n0 1 0.5\n1 2 0.5")
    assert g.n == 3
    assert len(g.edges) == 2


def test_parse_comments_and_blanks():
    g = parse_graph("# heading\nn 3\n\n0 1 0.5\n# mid comment\n1 2 0.5\n")
    assert len(g.edges) == 2


def test_parse_negative_weight_rejected():
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_graph("n 2\n0 1 -1")


def test_parse_self_loop_rejected():
    with pytest.raises(GraphFormatError, match="self-loop"):
        parse_graph("n 2\n1 1 0.5")


def test_parse_duplicate_rejected_even_reversed():
    with pytest.raises(GraphFormatError, match="duplicate"):
        parse_graph("n 3\n0 1 0.5\n1 0 0.25")


def test_parse_index_out_of_range():
    with pytest.raises(GraphFormatError, match="out of range"):
        parse_graph("n 2\n0 2 0.5")


def test_parse_header_rules():
    with pytest.raises(GraphFormatError, match="repeated"):
        parse_graph("n 2\nn 2\n0 1 1.0")
    with pytest.raises(GraphFormatError, match="precede"):
        parse_graph("0 1 1.0\nn 2")
    with pytest.raises(GraphFormatError):
        parse_graph("n 0\n")
    with pytest.raises(GraphFormatError):
        parse_graph("")


def test_parse_without_header_infers_n():
    g = parse_graph("0 3 1.0")
    assert g.n == 4


def test_zero_weight_edges_dropped_isolated_vertices_kept():
    g = parse_graph("n 5\n0 1 0.0\n2 3 2.0")
    assert g.edges == ((2, 3, 2.0),)
    assert g.n == 5
    assert neighbors(g, 0) == ()
    assert neighbors(g, 4) == ()


def test_parse_malformed_line():
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_graph("n 2\n0 1\n")
    with pytest.raises(GraphFormatError, match="line 1"):
        parse_graph("0 x 1.0\n")


@pytest.mark.parametrize(
    "weights,expected",
    [((2.0, 2.0), (0.5, 0.5)), ((1.0,), (1.0,)), ((1.0, 3.0), (0.25, 0.75))],
)
def test_normalize_proportions(weights, expected):
    edges = tuple((i, i + 1, w) for i, w in enumerate(weights))
    g = normalize_weights(WeightedGraph(n=len(weights) + 1, edges=edges))
    assert tuple(w for (_, _, w) in g.edges) == pytest.approx(expected, abs=1e-15)
    assert abs(g.total_weight - 1.0) <= 1e-12


def test_normalize_empty_rejected():
    with pytest.raises(GraphFormatError, match="normalize"):
        normalize_weights(WeightedGraph(n=2, edges=()))


def test_normalize_idempotent():
    g = normalize_weights(WeightedGraph(n=3, edges=((0, 1, 0.3), (1, 2, 0.9))))
    g2 = normalize_weights(g)
    for (a, b) in zip(g.edges, g2.edges):
        assert math.isclose(a[2], b[2], abs_tol=1e-12)


def test_neighbors_star():
    g = parse_graph("n 4\n0 1 1\n0 2 1\n0 3 1")
    assert neighbors(g, 0) == (1, 2, 3)
    assert neighbors(g, 1) == (0,)


def test_neighbors_single_edge_and_range_check():
    g = parse_graph("n 2\n0 1 1")
    assert neighbors(g, 0) == (1,)
    with pytest.raises(GraphFormatError):
        neighbors(g, 2)


def test_edge_key_canonical():
    assert edge_key(3, 1) == (1, 3) == edge_key(1, 3)


@st.composite
def graphs(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    weights = draw(
        st.lists(
            st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False),
            min_size=len(chosen),
            max_size=len(chosen),
        )
    )
    edges = tuple(sorted((i, j, w) for (i, j), w in zip(chosen, weights)))
    return WeightedGraph(n=n, edges=edges)


@given(graphs())
def test_serialize_parse_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


@given(graphs())
def test_neighbors_symmetry(g):
    for v in range(g.n):
        for u in neighbors(g, v):
            assert v in neighbors(g, u)
