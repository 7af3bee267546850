"""The adversary's best response.

Overwriting node i to +1 raises the objective by ``ell_i * (1 - v_i)`` where
v is the internal opinion vector it faces. The objective is linear, so the k
largest gains form an exact best response. Against a randomised min player
v is replaced by its expectation, built from estimated selection
probabilities.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, InvalidParam
from .game import Strategy, top_k_ids


def expected_modified_opinions(s, p_hat) -> np.ndarray:
    """Expected internal opinions after the min player: -1 w.p. p_i, else s_i."""
    s = np.asarray(s, dtype=float)
    p_hat = np.asarray(p_hat, dtype=float)
    if s.shape != p_hat.shape:
        raise DimensionMismatch(f"s {s.shape} and p_hat {p_hat.shape} differ")
    if np.any((p_hat < 0) | (p_hat > 1)):
        raise InvalidParam("probabilities must lie in [0, 1]")
    return -p_hat + (1.0 - p_hat) * s


def delta_scores(ell, s, p_hat) -> np.ndarray:
    """Gain in expected cost from overwriting each node."""
    return np.asarray(ell, dtype=float) * (1.0 - expected_modified_opinions(s, p_hat))


def best_response_topk(scores, k: int) -> Strategy:
    scores = np.asarray(scores, dtype=float)
    if not 0 <= k <= scores.shape[0]:
        raise InvalidParam(f"k={k} outside 0..{scores.shape[0]}")
    return Strategy("max", top_k_ids(scores, k))


def exact_best_response(ell, v, k: int) -> Strategy:
    """Best k nodes to overwrite against a known opinion vector ``v`` (entries <= 1)."""
    v = np.asarray(v, dtype=float)
    if np.any(v > 1):
        raise InvalidParam("opinions above +1 cannot be overwritten profitably")
    return best_response_topk(np.asarray(ell, dtype=float) * (1.0 - v), k)


def overwritten_value(ell, v, y: Strategy) -> float:
    """``ell @ v`` after setting the nodes in ``y`` to +1."""
    v = np.asarray(v, dtype=float)
    return float(np.asarray(ell) @ np.where(y.mask(len(v)), 1.0, v))
