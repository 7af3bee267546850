import sys

import numpy as np
import pytest

from opinion_stackelberg import WeightedGraph, make_instance, validate_graph

G2_TEXT = "node 1 1.0 1.0\nnode 2 1.0 0.0\nedge 1 2 1.0\nedge 2 1 1.0"


def random_weighted_graph(rng, n, p=None):
    """Random anchors in (0.1, 2] and edge weights in (0, 3]; density p."""
    p = rng.uniform(0.05, 0.9) if p is None else p
    anchor = rng.uniform(0.1, 2.0, size=n)
    edges = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rng.random() < p:
                edges[(i, j)] = float(rng.uniform(0.01, 3.0))
    return validate_graph(WeightedGraph(n, anchor, edges))


def random_instance(rng, n, k):
    g = random_weighted_graph(rng, n)
    return make_instance(g, rng.uniform(-1, 1, size=n), k)


@pytest.fixture
def g2():
    g = WeightedGraph(2, np.array([1.0, 1.0]), {(1, 2): 1.0, (2, 1): 1.0})
    return g, np.array([1.0, 0.0])


@pytest.fixture
def g2_inst(g2):
    return make_instance(*g2, k=1)


@pytest.fixture
def edgeless():
    g = WeightedGraph(4, np.array([0.5, 1.0, 2.0, 3.0]), {})
    return g, np.array([0.3, -1.0, 0.9, 0.0])


@pytest.fixture(scope="session")
def fifty_graphs():
    rng = np.random.default_rng(20240501)
    out = []
    for _ in range(50):
        n = int(rng.integers(1, 51))
        out.append((random_weighted_graph(rng, n), rng.uniform(-1, 1, size=n)))
    return out


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
