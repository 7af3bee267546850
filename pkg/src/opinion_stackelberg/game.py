"""The two-player internal opinion design game.

The min player picks k nodes whose internal opinion becomes -1; the
adversary then picks k nodes whose internal opinion becomes +1, overwriting
the min player where they overlap. The shared objective is the sum of the
equilibrium expressed opinions, which is linear in the final internal
opinions: ``g(x, y) = ell @ final``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .absorbing import AbsorptionModel, absorption_model
from .errors import InvalidParam, RoleMismatch
from .graph import WeightedGraph, check_opinions

ROLES = ("min", "max")


@dataclass(frozen=True)
class Strategy:
    """A k-subset of node ids (1-based) tagged with the player that chose it."""

    role: str
    subset: frozenset[int]

    def __post_init__(self):
        if self.role not in ROLES:
            raise RoleMismatch(f"role must be one of {ROLES}, got {self.role!r}")
        object.__setattr__(self, "subset", frozenset(int(i) for i in self.subset))

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.subset))

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        if self.subset:
            m[np.array(self.ids) - 1] = True
        return m

    def check(self, n: int, k: int) -> "Strategy":
        if len(self.subset) != k:
            raise InvalidParam(f"{self.role} strategy has {len(self.subset)} nodes, expected k={k}")
        if any(not 1 <= i <= n for i in self.subset):
            raise InvalidParam(f"{self.role} strategy references a node outside 1..{n}")
        return self

    def __str__(self):
        return format_subset(self.subset)


def format_subset(ids: Iterable[int]) -> str:
    """Report encoding of a subset: sorted ids joined by ``;``."""
    return ";".join(str(i) for i in sorted(ids))


def parse_subset(text: str) -> frozenset[int]:
    return frozenset(int(t) for t in text.split(";") if t)


def top_k_ids(scores, k: int) -> tuple[int, ...]:
    """Ids of the k largest scores; equal scores go to the lower id."""
    order = np.argsort(-np.asarray(scores, dtype=float), kind="stable")
    return tuple(sorted(int(i) + 1 for i in order[:k]))


@dataclass(frozen=True)
class GameInstance:
    graph: WeightedGraph
    s: np.ndarray
    model: AbsorptionModel
    k: int

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def ell(self) -> np.ndarray:
        return self.model.ell


def make_instance(graph: WeightedGraph, s, k: int) -> GameInstance:
    s = check_opinions(s, graph.n)
    if not 1 <= k <= graph.n:
        raise InvalidParam(f"k must be in 1..{graph.n}, got {k}")
    return GameInstance(graph, s, absorption_model(graph), int(k))


def min_delta(s: np.ndarray, x: Strategy) -> np.ndarray:
    """Delta encoding of the min player's move: -s_i - 1 on selected nodes, else 0."""
    s = np.asarray(s, dtype=float)
    return np.where(x.mask(len(s)), -s - 1.0, 0.0)


def max_delta(s_prime: np.ndarray, y: Strategy) -> np.ndarray:
    """Delta encoding of the adversary's move against s': 1 - s'_i on selected nodes."""
    s_prime = np.asarray(s_prime, dtype=float)
    return np.where(y.mask(len(s_prime)), 1.0 - s_prime, 0.0)


def apply_strategies(s, x: Strategy, y: Strategy | None = None) -> np.ndarray:
    """Final internal opinions: +1 on y, else -1 on x, else unchanged."""
    if x.role != "min":
        raise RoleMismatch("x must be a min-player strategy")
    if y is not None and y.role != "max":
        raise RoleMismatch("y must be an adversary (max) strategy")
    s = np.asarray(s, dtype=float)
    out = np.where(x.mask(len(s)), -1.0, s)
    if y is not None:
        out = np.where(y.mask(len(s)), 1.0, out)
    return out


def cost_g(inst: GameInstance, x: Strategy, y: Strategy | None) -> float:
    """Sum of equilibrium expressed opinions after both moves."""
    x.check(inst.n, inst.k)
    if y is not None:
        y.check(inst.n, inst.k)
    return float(inst.ell @ apply_strategies(inst.s, x, y))


def loss_f(inst: GameInstance, N: Iterable[int], x: Strategy) -> float:
    """Min player's loss for the round in which the adversary picked ``N``.

    Affine in the delta vector x: nodes in N contribute ell_i whatever x
    does there, the rest contribute ell_i * (x_i + s_i).
    """
    attacked = Strategy("max", N).check(inst.n, inst.k).mask(inst.n)
    x.check(inst.n, inst.k)
    free = inst.ell * (min_delta(inst.s, x) + inst.s)
    return float(free[~attacked].sum() + inst.ell[attacked].sum())


def individual_cost(g: WeightedGraph, z, s, i: int) -> float:
    """C_i(z) = w_ii (z_i - s_i)^2 + sum_j w_ij (z_i - z_j)^2 for node id ``i``."""
    if not 1 <= i <= g.n:
        raise IndexError(f"node {i} outside 1..{g.n}")
    z = np.asarray(z, dtype=float)
    s = np.asarray(s, dtype=float)
    row = g.weight_matrix()[i - 1]
    zi = z[i - 1]
    return float(g.anchor[i - 1] * (zi - s[i - 1]) ** 2 + row @ (zi - z) ** 2)


def social_cost(z) -> float:
    return float(np.sum(z))
