"""Follow-the-perturbed-leader for the min player.

After rounds 1..t-1 with adversary subsets N^(1..t-1), selecting node i
lowers the perturbed cumulative loss by ``(ell_i * c_i + R_i) * (1 + s_i)``
where c_i counts the past rounds in which i was not attacked and R is a
fresh U[0, sqrt(T)]^n draw. The leader is the k nodes with the largest such
reduction.

Random streams
--------------
Every draw comes from ``substream(seed, tag, round, block)``: a PCG64
generator seeded by ``SeedSequence(seed, spawn_key=(tag, round, block))``.
Sample j (1-based) of a round's estimate is row ``(j - 1) % BLOCK`` of
block ``(j - 1) // BLOCK``, so its value never depends on r or on how
blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParam
from .game import GameInstance, Strategy

RNG_VERSION = "pcg64-seedsequence-v1"
TAG_ESTIMATE = 1
TAG_PLAY = 2
TAG_TMIN = 3
BLOCK = 1024


def substream(seed: int, tag: int, round_: int, block: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(tag), int(round_), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class FtplState:
    inst: GameInstance
    horizon: int
    seed: int = 0
    history: list[frozenset[int]] = field(default_factory=list)
    counts: np.ndarray = None

    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidParam(f"horizon T must be >= 1, got {self.horizon}")
        history, self.history = list(self.history), []
        self.counts = np.zeros(self.inst.n, dtype=np.int64)
        for N in history:
            self.record(N)

    @property
    def round(self) -> int:
        """The round about to be played (1-based)."""
        return len(self.history) + 1

    @property
    def scale(self) -> float:
        return math.sqrt(self.horizon)

    def record(self, N) -> None:
        N = Strategy("max", N).check(self.inst.n, self.inst.k).subset
        self.history.append(N)
        self.counts += 1
        self.counts[np.array(sorted(N)) - 1] -= 1


def _rows(state: FtplState, tag: int, round_: int, block: int, nrows: int) -> np.ndarray:
    return substream(state.seed, tag, round_, block).uniform(0.0, state.scale, size=(nrows, state.inst.n))


def draw_perturbation(state: FtplState, index: int = 0, purpose: str = "play") -> np.ndarray:
    """Perturbation vector for the current round.

    ``purpose="play"`` is the draw behind the realised move (index 0);
    ``purpose="estimate"`` returns estimation sample ``index`` (1-based).
    """
    if purpose == "play":
        return _rows(state, TAG_PLAY, state.round, index, 1)[0]
    if purpose == "estimate":
        if index < 1:
            raise InvalidParam("estimation sample indices start at 1")
        block, row = divmod(index - 1, BLOCK)
        return _rows(state, TAG_ESTIMATE, state.round, block, row + 1)[row]
    raise InvalidParam(f"unknown purpose {purpose!r}")


def select_batch(state: FtplState, R: np.ndarray) -> np.ndarray:
    """Leader for each row of ``R``; returns 0-based node positions, shape (rows, k)."""
    inst = state.inst
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if R.shape[1] != inst.n:
        raise DimensionMismatch(f"perturbation has {R.shape[1]} entries, expected {inst.n}")
    alpha = inst.ell * state.counts + R
    score = alpha * (1.0 + inst.s)
    return np.argsort(-score, axis=1, kind="stable")[:, : inst.k]


def ftpl_select(state: FtplState, R) -> Strategy:
    """The min player's move given perturbation ``R`` (ties to the lower id)."""
    return Strategy("min", (select_batch(state, R)[0] + 1).tolist())


@dataclass(frozen=True)
class ProbabilityEstimate:
    p_hat: np.ndarray
    r: int


def estimate_selection_probs(state: FtplState, r: int | None = None, workers: int = 1) -> ProbabilityEstimate:
    """Empirical selection frequency of each node over r independent FTPL draws."""
    r = state.horizon if r is None else int(r)
    if r < 1:
        raise InvalidParam(f"r must be >= 1, got {r}")
    n, round_ = state.inst.n, state.round

    def tally(block: int) -> np.ndarray:
        nrows = min(BLOCK, r - block * BLOCK)
        chosen = select_batch(state, _rows(state, TAG_ESTIMATE, round_, block, nrows))
        return np.bincount(chosen.ravel(), minlength=n)

    blocks = range(-(-r // BLOCK))
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(tally, blocks))
    else:
        tallies = [tally(b) for b in blocks]
    hits = np.sum(tallies, axis=0)
    return ProbabilityEstimate(hits / r, r)
