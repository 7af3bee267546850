"""Exhaustive reference computations over all k-subsets.

These are deliberately literal: they evaluate the game's payoff for every
candidate subset instead of relying on the top-k shortcuts used by the
engines, so they can be used to check those shortcuts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidParam, TooLarge
from .game import GameInstance, Strategy

MAX_NODES = 22
MAX_SUBSETS = 10**7
# payoff-matrix cross-check runs only when C(n,k)^2 stays below this
MAX_PAYOFF_ENTRIES = 10**6
CHUNK = 1 << 14


def _guard(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise InvalidParam(f"need 0 <= k <= n, got n={n}, k={k}")
    count = math.comb(n, k)
    if n > MAX_NODES or count > MAX_SUBSETS:
        raise TooLarge(f"C({n},{k}) = {count} subsets exceeds the enumeration guard")
    return count


def enumerate_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of 1..n in lexicographic order."""
    _guard(n, k)
    return itertools.combinations(range(1, n + 1), k)


def subset_masks(n: int, k: int, chunk: int = CHUNK) -> Iterator[tuple[list[tuple[int, ...]], np.ndarray]]:
    """Lexicographic subsets in blocks, each with its boolean membership matrix."""
    it = enumerate_subsets(n, k)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        mask = np.zeros((len(block), n), dtype=bool)
        if k:
            rows = np.repeat(np.arange(len(block)), k)
            mask[rows, np.array(block).ravel() - 1] = True
        yield block, mask


@dataclass(frozen=True)
class MinmaxResult:
    minmax_value: float
    argmin_x: Strategy
    per_x_table: dict[tuple[int, ...], float]
    maxmin_value: float
    argmax_y: Strategy


def _top_sum(gains: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros(gains.shape[0])
    return np.sort(gains, axis=1)[:, -k:].sum(axis=1)


def brute_minmax(inst: GameInstance) -> MinmaxResult:
    """Pure-strategy minmax and maxmin values of the game.

    For each min subset the adversary's reply is the top-k of its overwrite
    gains; for each adversary subset the min player's reply is the top-k of
    ``ell_i * (1 + s_i)`` outside it. When the payoff matrix is small enough
    both values are recomputed from the full double enumeration as well.
    """
    n, k, ell, s = inst.n, inst.k, inst.ell, inst.s
    _guard(n, k)
    table: dict[tuple[int, ...], float] = {}
    best_y, best_y_val = None, -math.inf
    for block, X in subset_masks(n, k):
        V = np.where(X, -1.0, s)
        worst = V @ ell + _top_sum(ell * (1.0 - V), k)
        table.update(zip(block, worst.tolist()))
    for block, Y in subset_masks(n, k):
        base = np.where(Y, 1.0, s) @ ell
        reduction = np.where(Y, 0.0, ell * (1.0 + s))
        vals = base - _top_sum(reduction, k)
        i = int(np.argmax(vals))
        if vals[i] > best_y_val:
            best_y, best_y_val = block[i], float(vals[i])

    argmin = min(table, key=table.__getitem__)  # dict order is lexicographic
    minmax = table[argmin]
    if minmax < best_y_val - 1e-9:
        raise AssertionError(f"weak duality violated: maxmin {best_y_val} > minmax {minmax}")

    if math.comb(n, k) ** 2 <= MAX_PAYOFF_ENTRIES:
        (_, X), = subset_masks(n, k, chunk=MAX_PAYOFF_ENTRIES)
        final = np.where(X[None, :, :], 1.0, np.where(X[:, None, :], -1.0, s))
        payoff = final @ ell  # payoff[x, y]
        if not (
            math.isclose(payoff.max(axis=1).min(), minmax, abs_tol=1e-9)
            and math.isclose(payoff.min(axis=0).max(), best_y_val, abs_tol=1e-9)
        ):
            raise AssertionError("top-k replies disagree with the payoff-matrix enumeration")

    return MinmaxResult(minmax, Strategy("min", argmin), table, best_y_val, Strategy("max", best_y))


def brute_ftpl_argmin(state, R) -> Strategy:
    """Minimiser of past losses plus ``R @ x`` by scoring every k-subset.

    Ties go to the lexicographically smallest subset.
    """
    inst = state.inst
    n, k, ell, s = inst.n, inst.k, inst.ell, inst.s
    R = np.asarray(R, dtype=float)
    if R.shape != (n,):
        raise InvalidParam(f"perturbation must have length {n}")
    _guard(n, k)
    best, best_val = None, math.inf
    for block, X in subset_masks(n, k):
        delta = np.where(X, -1.0 - s, 0.0)
        total = delta @ R
        for N in state.history:
            attacked = np.zeros(n, dtype=bool)
            attacked[np.array(sorted(N)) - 1] = True
            total = total + np.where(attacked, ell, ell * (delta + s)).sum(axis=1)
        i = int(np.argmin(total))
        if total[i] < best_val:
            best, best_val = block[i], float(total[i])
    return Strategy("min", best)
