"""Weighted directed influence graphs and their text format.

Node ids are the contiguous integers 1..n. Arrays indexed by node use
position ``id - 1``. Self-influence lives only in ``anchor`` (the w_ii
weights); ``edges`` maps ``(i, j)`` with ``i != j`` to how strongly node i
is influenced by node j.

File format, one record per line, ``#`` starts a comment::

    node <id> <anchor_weight> <internal_opinion>
    edge <src> <dst> <weight>

All node lines come first, in id order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InvalidParam, NegativeWeight, NonFinite, ParseError, ZeroAnchor


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    n: int
    anchor: np.ndarray
    edges: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        anchor = np.array(self.anchor, dtype=float)
        anchor.setflags(write=False)
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(
            self, "edges", MappingProxyType({(int(i), int(j)): float(w) for (i, j), w in self.edges.items()})
        )

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.anchor, other.anchor)
            and dict(self.edges) == dict(other.edges)
        )

    __hash__ = None

    def weight_matrix(self) -> np.ndarray:
        """Dense n x n matrix of the off-diagonal weights w_ij (zero diagonal)."""
        W = np.zeros((self.n, self.n))
        for (i, j), w in self.edges.items():
            W[i - 1, j - 1] = w
        return W

    def neighbors(self, i: int) -> list[int]:
        """N(i): the nodes j != i with w_ij > 0."""
        return sorted(j for (a, j), w in self.edges.items() if a == i and w > 0)


def validate_graph(raw: WeightedGraph) -> WeightedGraph:
    """Return ``raw`` unchanged if every structural invariant holds."""
    if raw.n < 1:
        raise InvalidParam(f"graph needs at least one node, got n={raw.n}")
    if raw.anchor.shape != (raw.n,):
        raise InvalidParam(f"anchor has shape {raw.anchor.shape}, expected ({raw.n},)")
    if not np.all(np.isfinite(raw.anchor)):
        raise NonFinite("anchor weights must be finite")
    if np.any(raw.anchor < 0):
        raise NegativeWeight(f"negative anchor weight at node {int(np.argmin(raw.anchor)) + 1}")
    zero = np.flatnonzero(raw.anchor == 0)
    if zero.size:
        raise ZeroAnchor(f"node {int(zero[0]) + 1} has zero anchor weight")
    for (i, j), w in raw.edges.items():
        if not (1 <= i <= raw.n and 1 <= j <= raw.n):
            raise InvalidParam(f"edge ({i},{j}) references a node outside 1..{raw.n}")
        if i == j:
            raise InvalidParam(f"self edge ({i},{i}); self-influence belongs in the anchor")
        if not math.isfinite(w):
            raise NonFinite(f"edge ({i},{j}) weight is not finite")
        if w < 0:
            raise NegativeWeight(f"edge ({i},{j}) has negative weight {w}")
    return raw


def check_opinions(values, n: int | None = None) -> np.ndarray:
    """Coerce to a float vector and check every entry lies in [-1, 1]."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or (n is not None and v.shape[0] != n):
        raise InvalidParam(f"opinion vector must have length {n}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFinite("opinions must be finite")
    if np.any(np.abs(v) > 1):
        raise InvalidParam("opinions must lie in [-1, 1]")
    return v


def load_graph(text: str) -> tuple[WeightedGraph, np.ndarray]:
    """Parse the graph file format; returns the validated graph and internal opinions."""
    anchors: list[float] = []
    opinions: list[float] = []
    edges: dict[tuple[int, int], float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        try:
            if parts[0] == "node":
                if len(parts) != 4:
                    raise ParseError("expected: node <id> <anchor_weight> <internal_opinion>")
                if edges:
                    raise ParseError("node lines must precede edge lines")
                nid = int(parts[1])
                if nid != len(anchors) + 1:
                    if 1 <= nid <= len(anchors):
                        raise ParseError(f"duplicate node {nid}")
                    raise ParseError(f"node ids must be 1..n in order; expected {len(anchors) + 1}, got {nid}")
                a, op = float(parts[2]), float(parts[3])
                if not -1 <= op <= 1:
                    raise ParseError(f"internal opinion {op} of node {nid} outside [-1, 1]")
                anchors.append(a)
                opinions.append(op)
            elif parts[0] == "edge":
                if len(parts) != 4:
                    raise ParseError("expected: edge <src> <dst> <weight>")
                i, j, w = int(parts[1]), int(parts[2]), float(parts[3])
                for v in (i, j):
                    if not 1 <= v <= len(anchors):
                        raise ParseError(f"edge references undeclared node {v}")
                if i == j:
                    raise ParseError(f"self edge on node {i}; use the anchor weight instead")
                if (i, j) in edges:
                    raise ParseError(f"duplicate edge ({i},{j})")
                edges[(i, j)] = w
            else:
                raise ParseError(f"unknown record type {parts[0]!r}")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if not anchors:
        raise ParseError("no node records")
    g = validate_graph(WeightedGraph(len(anchors), np.array(anchors), edges))
    return g, np.array(opinions)


def serialize_graph(g: WeightedGraph, s) -> str:
    """Inverse of :func:`load_graph`; ``repr`` keeps every float bit-exact."""
    s = check_opinions(s, g.n)
    lines = [f"node {i + 1} {float(g.anchor[i])!r} {float(s[i])!r}" for i in range(g.n)]
    lines += [f"edge {i} {j} {w!r}" for (i, j), w in sorted(g.edges.items())]
    return "\n".join(lines) + "\n"


def read_graph_file(path) -> tuple[WeightedGraph, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def generate_graph(
    kind: str,
    n: int,
    seed: int = 0,
    anchor_value: float = 1.0,
    opinions: str | float = "uniform",
    p: float = 0.5,
) -> tuple[WeightedGraph, np.ndarray]:
    """Build a test instance.

    ``kind`` is ``"path"``, ``"complete"`` or ``"random"`` (each directed
    edge present independently with probability ``p``). All edges have unit
    weight. ``opinions`` is ``"uniform"`` for i.i.d. U[-1, 1] internal
    opinions, or a number for a constant vector. The result depends only on
    the arguments.
    """
    if n < 1:
        raise InvalidParam(f"n must be >= 1, got {n}")
    if not (anchor_value > 0 and math.isfinite(anchor_value)):
        raise InvalidParam(f"anchor_value must be positive, got {anchor_value}")
    rng = np.random.default_rng(seed)
    edges: dict[tuple[int, int], float] = {}
    if kind == "path":
        for i in range(1, n):
            edges[(i, i + 1)] = 1.0
            edges[(i + 1, i)] = 1.0
    elif kind == "complete":
        edges = {(i, j): 1.0 for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
    elif kind == "random":
        if not 0 <= p <= 1:
            raise InvalidParam(f"edge probability must be in [0, 1], got {p}")
        coins = rng.random((n, n))
        for i, j in zip(*np.nonzero(coins < p)):
            if i != j:
                edges[(int(i) + 1, int(j) + 1)] = 1.0
    else:
        raise InvalidParam(f"unknown graph kind {kind!r}")

    if isinstance(opinions, str):
        if opinions != "uniform":
            raise InvalidParam(f"unknown opinion mode {opinions!r}")
        s = rng.uniform(-1.0, 1.0, size=n)
    else:
        s = np.full(n, float(opinions))
    s = check_opinions(s, n)
    g = validate_graph(WeightedGraph(n, np.full(n, float(anchor_value)), edges))
    return g, s
