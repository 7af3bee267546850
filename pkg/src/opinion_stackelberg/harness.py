"""Repeated play between the FTPL min player and the sampling adversary.

Each round t estimates the min player's selection probabilities from r
perturbation draws, lets the adversary best-respond to the implied expected
opinions, then realises the min player's move from one more draw. All T
rounds are played; the output strategy is the move of a round T_min drawn
uniformly from 1..T afterwards, which leaves its distribution unchanged
while keeping the whole transcript for diagnostics.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .adversary import (
    best_response_topk,
    delta_scores,
    exact_best_response,
    expected_modified_opinions,
    overwritten_value,
)
from .errors import InvalidParam
from .ftpl import (
    RNG_VERSION,
    TAG_TMIN,
    FtplState,
    draw_perturbation,
    estimate_selection_probs,
    ftpl_select,
    substream,
)
from .game import GameInstance, Strategy, format_subset, loss_f, make_instance
from .graph import read_graph_file
from .oracle import brute_minmax, subset_masks

log = logging.getLogger(__name__)

SAMPLE_WARN_LIMIT = 10**8
# enumerate the offline optimum only below this many subsets
REGRET_ENUM_LIMIT = 20_000
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    graph_path: str | None
    k: int
    T: int
    r: int | None = None
    seed: int = 0
    output_dir: str | None = None
    formats: tuple[str, ...] = FORMATS
    compute_gap: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.T < 1:
            raise InvalidParam(f"T must be >= 1, got {self.T}")
        if self.r is not None and self.r < 1:
            raise InvalidParam(f"r must be >= 1, got {self.r}")
        if self.k < 1:
            raise InvalidParam(f"k must be >= 1, got {self.k}")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise InvalidParam(f"unknown report formats {sorted(unknown)}")

    @property
    def samples(self) -> int:
        return self.T if self.r is None else self.r

    def echo(self) -> dict:
        # output_dir and workers are left out so reports compare byte for byte
        return {
            "graph": self.graph_path,
            "k": self.k,
            "T": self.T,
            "r": self.samples,
            "seed": self.seed,
            "formats": sorted(self.formats),
            "compute_gap": self.compute_gap,
        }


@dataclass(frozen=True)
class RoundRecord:
    t: int
    x_subset: frozenset[int]
    y_subset: frozenset[int]
    p_hat: np.ndarray
    realized_loss: float
    expected_loss_estimate: float


@dataclass
class RunReport:
    config: RunConfig
    records: list[RoundRecord]
    T_min: int
    output_strategy: Strategy
    avg_p: np.ndarray
    regret_curve: np.ndarray
    minmax_value: float | None = None
    gap: float | None = None
    gap_plus: float | None = None
    version: str = field(default_factory=lambda: _version())


def _version() -> str:
    from . import __version__

    return f"opinion_stackelberg {__version__} ({RNG_VERSION})"


def run_stackelberg(config: RunConfig, inst: GameInstance | None = None) -> RunReport:
    """Play T rounds and assemble the report.

    The instance is loaded from ``config.graph_path`` unless given directly.
    """
    if inst is None:
        if config.graph_path is None:
            raise InvalidParam("no graph given")
        graph, s = read_graph_file(config.graph_path)
        inst = make_instance(graph, s, config.k)
    elif inst.k != config.k:
        raise InvalidParam(f"instance has k={inst.k}, config has k={config.k}")
    T, r = config.T, config.samples
    if T * r > SAMPLE_WARN_LIMIT:
        log.warning("T*r = %d sample selections; expect a long run", T * r)

    state = FtplState(inst, T, config.seed)
    records = []
    for t in range(1, T + 1):
        est = estimate_selection_probs(state, r, workers=config.workers)
        y = best_response_topk(delta_scores(inst.ell, inst.s, est.p_hat), inst.k)
        x = ftpl_select(state, draw_perturbation(state))
        v = expected_modified_opinions(inst.s, est.p_hat)
        records.append(
            RoundRecord(
                t=t,
                x_subset=x.subset,
                y_subset=y.subset,
                p_hat=est.p_hat,
                realized_loss=loss_f(inst, y.subset, x),
                expected_loss_estimate=overwritten_value(inst.ell, v, y),
            )
        )
        state.record(y.subset)

    T_min = int(substream(config.seed, TAG_TMIN, 0).integers(1, T + 1))
    avg_p = np.mean([rec.p_hat for rec in records], axis=0)
    report = RunReport(
        config=config,
        records=records,
        T_min=T_min,
        output_strategy=Strategy("min", records[T_min - 1].x_subset),
        avg_p=avg_p,
        regret_curve=compute_regret(records, inst),
    )
    if config.compute_gap:
        report.minmax_value = brute_minmax(inst).minmax_value
        report.gap = equilibrium_gap(avg_p, inst, report.minmax_value)
        report.gap_plus = max(report.gap, 0.0)
    return report


def compute_regret(records: Sequence[RoundRecord], inst: GameInstance) -> np.ndarray:
    """Running regret of the realised moves against the best fixed k-subset.

    Against a fixed subset x, the loss summed over rounds 1..t is a base
    term minus ``sum_{i in x} ell_i * c_i * (1 + s_i)`` with c_i the number of
    those rounds that left node i alone. The hindsight optimum is found by
    enumerating subsets when that is cheap, otherwise as the top-k of those
    per-node reductions.
    """
    if not records:
        raise InvalidParam("no rounds to evaluate")
    n, k, ell, s = inst.n, inst.k, inst.ell, inst.s
    played = np.cumsum([loss_f(inst, rec.y_subset, Strategy("min", rec.x_subset)) for rec in records])

    attacked = np.zeros((len(records), n), dtype=bool)
    for row, rec in enumerate(records):
        attacked[row, np.array(sorted(rec.y_subset)) - 1] = True
    base = np.cumsum(np.where(attacked, 1.0, s) @ ell)
    per_node = np.cumsum(~attacked, axis=0) * (ell * (1.0 + s))

    if math.comb(n, k) <= REGRET_ENUM_LIMIT:
        best = np.full(len(records), -np.inf)
        for _, X in subset_masks(n, k):
            best = np.maximum(best, (per_node @ X.T.astype(float)).max(axis=1))
    else:
        best = np.sort(per_node, axis=1)[:, -k:].sum(axis=1)
    return played - (base - best)


def equilibrium_gap(avg_p, inst: GameInstance, minmax_value: float | None = None) -> float:
    """Adversary's best value against the averaged strategy, minus the pure minmax value.

    Negative when the randomised average does better than any pure subset.
    """
    if minmax_value is None:
        minmax_value = brute_minmax(inst).minmax_value
    v = expected_modified_opinions(inst.s, avg_p)
    y = exact_best_response(inst.ell, v, inst.k)
    return overwritten_value(inst.ell, v, y) - minmax_value


def _g12(v: float) -> str:
    return f"{v:.12g}"


def emit_report(report: RunReport, formats, output_dir) -> list[str]:
    """Write ``rounds.csv`` and/or ``report.json``; returns the written paths."""
    formats = set(formats)
    unknown = formats - set(FORMATS)
    if unknown:
        raise InvalidParam(f"unknown report formats {sorted(unknown)}")
    if not formats:
        return []
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    if "csv" in formats:
        path = os.path.join(output_dir, "rounds.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x_subset", "y_subset", "realized_loss", "expected_loss_estimate", "cum_regret"])
            for rec, reg in zip(report.records, report.regret_curve):
                w.writerow(
                    [
                        rec.t,
                        format_subset(rec.x_subset),
                        format_subset(rec.y_subset),
                        _g12(rec.realized_loss),
                        _g12(rec.expected_loss_estimate),
                        _g12(reg),
                    ]
                )
        paths.append(path)
    if "json" in formats:
        path = os.path.join(output_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report), fh, indent=1)
            fh.write("\n")
        paths.append(path)
    return paths


def report_to_dict(report: RunReport) -> dict:
    out = {
        "version": report.version,
        "config": report.config.echo(),
        "T_min": report.T_min,
        "output_strategy": str(report.output_strategy),
        "avg_p": report.avg_p.tolist(),
    }
    if report.minmax_value is not None:
        out.update(minmax_value=report.minmax_value, gap=report.gap, gap_plus=report.gap_plus)
    out["rounds"] = [
        {
            "t": rec.t,
            "x_subset": format_subset(rec.x_subset),
            "y_subset": format_subset(rec.y_subset),
            "p_hat": rec.p_hat.tolist(),
            "realized_loss": rec.realized_loss,
            "expected_loss_estimate": rec.expected_loss_estimate,
            "cum_regret": float(reg),
        }
        for rec, reg in zip(report.records, report.regret_curve)
    ]
    return out
