import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import G2_TEXT
from opinion_stackelberg import (
    NegativeWeight,
    NonFinite,
    ParseError,
    WeightedGraph,
    ZeroAnchor,
    generate_graph,
    load_graph,
    serialize_graph,
    validate_graph,
)
from opinion_stackelberg.errors import InvalidParam


def test_g2_is_valid(g2):
    g, _ = g2
    assert validate_graph(g) is g


def test_zero_anchor_rejected():
    with pytest.raises(ZeroAnchor):
        validate_graph(WeightedGraph(1, np.array([0.0]), {}))


def test_negative_edge_rejected():
    with pytest.raises(NegativeWeight):
        validate_graph(WeightedGraph(2, np.ones(2), {(1, 2): -1.0}))


def test_non_finite_rejected():
    with pytest.raises(NonFinite):
        validate_graph(WeightedGraph(2, np.ones(2), {(1, 2): float("inf")}))
    with pytest.raises(NonFinite):
        validate_graph(WeightedGraph(2, np.array([1.0, np.nan]), {}))


def test_self_edge_rejected():
    with pytest.raises(InvalidParam):
        validate_graph(WeightedGraph(2, np.ones(2), {(1, 1): 1.0}))


def test_graph_is_read_only(g2):
    g, _ = g2
    with pytest.raises(ValueError):
        g.anchor[0] = 5.0
    with pytest.raises(TypeError):
        g.edges[(1, 2)] = 3.0


def test_load_g2(g2):
    g, s = load_graph(G2_TEXT)
    assert g == g2[0]
    np.testing.assert_array_equal(s, g2[1])


def test_load_skips_comments_and_blanks():
    g, s = load_graph("# header\n\nnode 1 2.5 -0.5  # anchor then opinion\n")
    assert g.n == 1 and g.anchor[0] == 2.5 and s[0] == -0.5


@pytest.mark.parametrize(
    "text",
    [
        "node 1 1.0 2.0",  # opinion outside [-1, 1]
        "node 1 1.0 0.0\nnode 2 1.0 0.0\nedge 1 3 1.0",  # undeclared node
        "node 1 1.0 0.0\nnode 1 1.0 0.0",  # duplicate node
        "node 1 1.0 0.0\nnode 2 1.0 0.0\nedge 1 2 1.0\nedge 1 2 2.0",  # duplicate edge
        "node 2 1.0 0.0",  # ids must start at 1
        "node 1 1.0 0.0\nedge 1 1 1.0",  # self edge
        "node 1 1.0 0.0\nedge 1 2 1.0\nnode 2 1.0 0.0",  # node after edge
        "node 1 one 0.0",
        "vertex 1 1.0 0.0",
        "",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_graph(text)


def test_load_validates_weights():
    with pytest.raises(ZeroAnchor):
        load_graph("node 1 0.0 0.0")
    with pytest.raises(NegativeWeight):
        load_graph("node 1 1.0 0.0\nnode 2 1.0 0.0\nedge 1 2 -1.0")


def test_generate_path():
    g, s = generate_graph("path", 3, seed=123, anchor_value=1.0, opinions=0.0)
    assert dict(g.edges) == {(1, 2): 1.0, (2, 1): 1.0, (2, 3): 1.0, (3, 2): 1.0}
    np.testing.assert_array_equal(s, np.zeros(3))


def test_generate_complete_matches_g2_topology(g2):
    g, s = generate_graph("complete", 2, seed=0, opinions=0.0)
    assert g == g2[0]
    np.testing.assert_array_equal(s, np.zeros(2))


def test_generate_random_is_deterministic():
    a = generate_graph("random", 20, seed=7, p=0.5)
    b = generate_graph("random", 20, seed=7, p=0.5)
    assert a[0] == b[0]
    np.testing.assert_array_equal(a[1], b[1])
    assert generate_graph("random", 20, seed=8, p=0.5)[0] != a[0]


def test_generate_random_density():
    g, s = generate_graph("random", 40, seed=1, p=0.25)
    assert abs(len(g.edges) / (40 * 39) - 0.25) < 0.03
    assert np.all(np.abs(s) <= 1)


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="path", n=0), dict(kind="random", n=3, p=1.5), dict(kind="star", n=3), dict(kind="path", n=3, anchor_value=0.0)],
)
def test_generate_invalid(kwargs):
    with pytest.raises(InvalidParam):
        generate_graph(**kwargs)


weights = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 6))
    anchor = draw(st.lists(st.floats(min_value=1e-6, max_value=1e6), min_size=n, max_size=n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = {e: draw(weights) for e in chosen}
    s = draw(st.lists(st.floats(min_value=-1, max_value=1), min_size=n, max_size=n))
    return WeightedGraph(n, np.array(anchor), edges), np.array(s)


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_serialize_round_trip(gs):
    g, s = gs
    g2, s2 = load_graph(serialize_graph(g, s))
    assert g2 == g
    assert s2.tobytes() == s.tobytes()
