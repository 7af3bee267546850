import math

import numpy as np
import pytest

from conftest import random_instance
from opinion_stackelberg import (
    FtplState,
    WeightedGraph,
    brute_ftpl_argmin,
    draw_perturbation,
    estimate_selection_probs,
    ftpl_select,
    make_instance,
)
from opinion_stackelberg.errors import InvalidParam
from opinion_stackelberg.ftpl import BLOCK, TAG_ESTIMATE, _rows


def area_p1(m=2000):
    """Pr(2 R1 > R2) for R uniform on [0, 2]^2 by midpoint integration."""
    c = (np.arange(m) + 0.5) * (2.0 / m)
    r1, r2 = np.meshgrid(c, c, indexing="ij")
    return float(np.mean(2 * r1 > r2))


def test_area_oracle():
    assert area_p1() == pytest.approx(0.75, abs=1e-3)


def test_perturbation_range_and_determinism(g2_inst):
    state = FtplState(g2_inst, horizon=4, seed=11)
    R = draw_perturbation(state)
    assert R.shape == (2,) and np.all((0 <= R) & (R <= 2))
    np.testing.assert_array_equal(R, draw_perturbation(FtplState(g2_inst, horizon=4, seed=11)))
    assert not np.array_equal(R, draw_perturbation(FtplState(g2_inst, horizon=4, seed=12)))
    state.record({1})
    assert not np.array_equal(R, draw_perturbation(state))


def test_perturbation_mean(g2_inst):
    state = FtplState(g2_inst, horizon=4, seed=5)
    draws = np.vstack([_rows(state, TAG_ESTIMATE, 1, b, BLOCK) for b in range(98)])
    assert draws.shape[0] >= 10**5
    assert np.all((draws >= 0) & (draws <= 2))
    np.testing.assert_allclose(draws.mean(axis=0), 1.0, atol=0.02)


def test_estimation_sample_addressing(g2_inst):
    state = FtplState(g2_inst, horizon=4, seed=5)
    block1 = _rows(state, TAG_ESTIMATE, 1, 1, BLOCK)
    np.testing.assert_array_equal(draw_perturbation(state, BLOCK + 7, "estimate"), block1[6])
    with pytest.raises(InvalidParam):
        draw_perturbation(state, 0, "estimate")


@pytest.mark.parametrize(
    "history, R",
    [([], (3.0, 1.0)), ([{2}], (0.5, 2.0))],
)
def test_ftpl_select_g2(g2_inst, history, R):
    state = FtplState(g2_inst, horizon=4, history=history)
    assert ftpl_select(state, np.array(R)).subset == {1}
    assert brute_ftpl_argmin(state, np.array(R)).subset == {1}


def test_ftpl_select_prefers_unattacked(g2_inst):
    # node 1 attacked three times: only node 2 accumulates reductions
    state = FtplState(g2_inst, horizon=4, history=[{1}, {1}, {1}])
    np.testing.assert_array_equal(state.counts, [0, 3])
    assert ftpl_select(state, np.array([1.0, 0.0])).subset == {2}


def test_counts_track_history():
    inst = random_instance(np.random.default_rng(0), 6, 2)
    state = FtplState(inst, horizon=10, history=[{1, 2}, {2, 3}])
    np.testing.assert_array_equal(state.counts, [1, 0, 1, 2, 2, 2])
    assert state.round == 3
    with pytest.raises(InvalidParam):
        state.record({1})


def test_full_selection_when_k_is_n():
    inst = random_instance(np.random.default_rng(1), 5, 5)
    state = FtplState(inst, horizon=9, seed=3)
    assert ftpl_select(state, draw_perturbation(state)).subset == {1, 2, 3, 4, 5}
    est = estimate_selection_probs(state, r=17)
    np.testing.assert_array_equal(est.p_hat, np.ones(5))


def test_ties_go_to_lowest_id():
    inst = make_instance(WeightedGraph(3, np.ones(3), {}), [-1.0, -1.0, -1.0], 2)
    state = FtplState(inst, horizon=4)
    # every score is zero when all internal opinions are already -1
    assert ftpl_select(state, np.array([2.0, 1.0, 0.5])).subset == {1, 2}
    assert brute_ftpl_argmin(state, np.array([2.0, 1.0, 0.5])).subset == {1, 2}


def test_estimate_g2_first_round(g2_inst):
    est = estimate_selection_probs(FtplState(g2_inst, horizon=4, seed=2024), r=10**6)
    np.testing.assert_allclose(est.p_hat, [0.75, 0.25], atol=0.002)
    assert est.r == 10**6


def test_single_sample_is_indicator():
    inst = random_instance(np.random.default_rng(4), 7, 3)
    state = FtplState(inst, horizon=50, seed=8)
    est = estimate_selection_probs(state, r=1)
    assert set(np.unique(est.p_hat)) <= {0.0, 1.0} and est.p_hat.sum() == 3
    chosen = ftpl_select(state, draw_perturbation(state, 1, "estimate"))
    np.testing.assert_array_equal(np.flatnonzero(est.p_hat) + 1, chosen.ids)


def test_estimate_sums_to_k_and_is_lattice():
    inst = random_instance(np.random.default_rng(5), 9, 3)
    state = FtplState(inst, horizon=30, seed=1, history=[{1, 2, 3}, {4, 5, 6}])
    r = 2500
    est = estimate_selection_probs(state, r=r)
    assert est.p_hat.sum() == pytest.approx(3, abs=1e-9)
    np.testing.assert_allclose(est.p_hat * r, np.round(est.p_hat * r), atol=1e-9)


def test_estimate_default_r_is_horizon(g2_inst):
    assert estimate_selection_probs(FtplState(g2_inst, horizon=37)).r == 37
    with pytest.raises(InvalidParam):
        estimate_selection_probs(FtplState(g2_inst, horizon=37), r=0)


def test_estimate_independent_of_workers():
    inst = random_instance(np.random.default_rng(6), 10, 3)
    state = FtplState(inst, horizon=100, seed=77, history=[{1, 2, 3}])
    a = estimate_selection_probs(state, r=5000, workers=1)
    b = estimate_selection_probs(state, r=5000, workers=4)
    np.testing.assert_array_equal(a.p_hat, b.p_hat)


def test_hoeffding_width_g2(g2_inst):
    r = 2000
    eps = math.sqrt(math.log(r) / r)
    hits = sum(
        abs(estimate_selection_probs(FtplState(g2_inst, horizon=4, seed=seed), r=r).p_hat[0] - 0.75) <= eps
        for seed in range(40)
    )
    assert hits >= 38
