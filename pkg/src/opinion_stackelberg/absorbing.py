"""Equilibrium expressed opinions through absorbing random walks.

Every node u_i gets an absorbing copy u_i' reached with weight w_ii; the
walk leaves u_i for a neighbour j with weight w_ij. With the walk's
absorption probabilities Q_UB, the Nash equilibrium of the opinion game is
``z = Q_UB @ f_B`` where ``f_B`` holds the values sitting on the absorbing
nodes (the internal opinions for the plain construction).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, InvalidParam, NoConvergence, SingularSystem
from .graph import WeightedGraph, check_opinions


@dataclass(frozen=True)
class AbsorptionModel:
    """Transient/absorbing split of the augmented walk.

    ``transient_ids`` are node ids; ``absorbing_ids`` are labels, ``"i'"`` for
    the absorbing copy of node i and ``"i"`` for a node held fixed.
    """

    transient_ids: tuple[int, ...]
    absorbing_ids: tuple[str, ...]
    P_UU: np.ndarray
    P_UB: np.ndarray
    Q_UB: np.ndarray | None = None
    ell: np.ndarray | None = None


def _transition(g: WeightedGraph, fixed: frozenset[int] = frozenset()) -> AbsorptionModel:
    W = g.weight_matrix()
    transient = [i for i in range(1, g.n + 1) if i not in fixed]
    held = sorted(fixed)
    u = np.array(transient, dtype=int) - 1
    h = np.array(held, dtype=int) - 1
    degree = g.anchor + W.sum(axis=1)

    P_UU = W[np.ix_(u, u)] / degree[u, None]
    copies = np.zeros((len(u), g.n))
    copies[np.arange(len(u)), u] = g.anchor[u] / degree[u]
    P_UB = np.hstack([copies, W[np.ix_(u, h)] / degree[u, None]])
    labels = tuple(f"{i}'" for i in range(1, g.n + 1)) + tuple(str(i) for i in held)
    return AbsorptionModel(tuple(transient), labels, P_UU, P_UB)


def build_transition(g: WeightedGraph) -> AbsorptionModel:
    """Row-normalised walk with U = V and one absorbing copy per node (Q_UB unset)."""
    return _transition(g)


def compute_qub(model: AbsorptionModel) -> AbsorptionModel:
    """Fill in absorption probabilities Q_UB and influence weights ell.

    Solves ``(I - P_UU) Q_UB = P_UB`` directly (LU with partial pivoting);
    the fundamental matrix is never formed. ``ell[j]`` is the column sum of
    Q_UB, i.e. how much the value on absorbing node j moves the sum of all
    expressed opinions.
    """
    m = model.P_UU.shape[0]
    if m == 0:
        Q = np.zeros((0, model.P_UB.shape[1]))
    else:
        try:
            Q = np.linalg.solve(np.eye(m) - model.P_UU, model.P_UB)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from None
        if not np.all(np.isfinite(Q)):
            raise SingularSystem("absorption probabilities are not finite")
    # round-off can leave -1e-17 entries
    Q = np.clip(Q, 0.0, None)
    return dataclasses.replace(model, Q_UB=Q, ell=Q.sum(axis=0))


def absorption_model(g: WeightedGraph) -> AbsorptionModel:
    return compute_qub(build_transition(g))


def equilibrium_opinions(model: AbsorptionModel, f_B) -> np.ndarray:
    """Expected absorbed value for each transient node, ``Q_UB @ f_B``."""
    if model.Q_UB is None:
        raise InvalidParam("Q_UB has not been computed; call compute_qub first")
    f_B = np.asarray(f_B, dtype=float)
    if f_B.shape != (model.Q_UB.shape[1],):
        raise DimensionMismatch(f"f_B has shape {f_B.shape}, expected ({model.Q_UB.shape[1]},)")
    return model.Q_UB @ f_B


def best_response_update(g: WeightedGraph, s: np.ndarray, z: np.ndarray) -> np.ndarray:
    """One synchronous round of every node's cost-minimising opinion given the others."""
    W = g.weight_matrix()
    return (g.anchor * s + W @ z) / (g.anchor + W.sum(axis=1))


def iterate_dynamics(g: WeightedGraph, s, tol: float = 1e-10, max_iter: int = 10**6) -> np.ndarray:
    """Run the synchronous update from z = s until the sup-norm step is below ``tol``."""
    if not tol > 0:
        raise InvalidParam("tol must be positive")
    s = check_opinions(s, g.n)
    W = g.weight_matrix()
    base = g.anchor * s
    degree = g.anchor + W.sum(axis=1)
    z = s.copy()
    for _ in range(max_iter):
        z_next = (base + W @ z) / degree
        step = np.max(np.abs(z_next - z))
        z = z_next
        if step < tol:
            return z
    raise NoConvergence(f"no convergence to tol={tol} within {max_iter} iterations")


def expressed_control_equilibrium(
    g: WeightedGraph, s, S: Iterable[int], fixed_value: float
) -> np.ndarray:
    """Equilibrium when the nodes in ``S`` express ``fixed_value`` and never update.

    Those nodes become absorbing themselves, so the walk is over U = V \\ S
    with absorbing set V' plus S.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (g.n,):
        raise DimensionMismatch(f"s has shape {s.shape}, expected ({g.n},)")
    s = check_opinions(s, g.n)
    S = frozenset(int(i) for i in S)
    if any(not 1 <= i <= g.n for i in S):
        raise InvalidParam(f"controlled set must be a subset of 1..{g.n}")
    if not -1 <= fixed_value <= 1:
        raise InvalidParam("fixed_value must lie in [-1, 1]")

    z = np.full(g.n, float(fixed_value))
    if len(S) == g.n:
        return z
    model = compute_qub(_transition(g, S))
    f_B = np.concatenate([s, np.full(len(S), float(fixed_value))])
    z[np.array(model.transient_ids) - 1] = equilibrium_opinions(model, f_B)
    return z
