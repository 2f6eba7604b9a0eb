"""Experiment construction, Bayes updating, local spreads, and garbling checks."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqmarket.errors import (
    ColumnSumMismatch,
    InfeasibleSpread,
    NegativeMass,
    NotBinary,
)
from seqmarket.experiment import (
    LocalSpreadParams,
    OddsRatio,
    apply_local_spread,
    binary_experiment_from_labels,
    build_experiment,
    is_blackwell_geq_binary,
    is_garbling_of,
    merge_equal_ratios,
    posterior,
)

DEMO_PAIRS = [(0.8, 0.2), (0.2, 0.8)]


def spread_mass_oracle(a, b, lr_low, lr_high):
    """Independent linear solve for the spread masses.

    Unknowns (pl_down, pl_up): conservation of the Low mass plus the High
    mass written through the two ratio constraints.
    """
    mat = np.array([[1.0, 1.0], [lr_low, lr_high]])
    pl_down, pl_up = np.linalg.solve(mat, np.array([a, b]))
    return (pl_down, lr_low * pl_down), (pl_up, lr_high * pl_up)


class TestBuildExperiment:
    def test_demo_labels(self):
        exp = build_experiment(DEMO_PAIRS)
        assert exp.labels == pytest.approx((0.2, 0.8), abs=1e-12)

    def test_single_uninformative_outcome(self):
        exp = build_experiment([(1.0, 1.0)])
        assert exp.m == 1
        assert exp.labels[0] == pytest.approx(0.5, abs=1e-12)

    def test_fully_revealing_top(self):
        exp = build_experiment([(1.0, 0.25), (0.0, 0.75)])
        assert exp.labels == pytest.approx((0.2, 1.0), abs=1e-12)
        assert math.isinf(exp.likelihood_ratio(1).as_float())

    def test_sorts_by_likelihood_ratio(self):
        exp = build_experiment([(0.2, 0.8), (0.8, 0.2)])
        assert exp.labels == pytest.approx((0.2, 0.8), abs=1e-12)

    def test_drops_zero_mass_pairs(self):
        exp = build_experiment([(0.8, 0.2), (0.0, 0.0), (0.2, 0.8)])
        assert exp.m == 2

    def test_negative_mass_rejected(self):
        with pytest.raises(NegativeMass):
            build_experiment([(0.9, -0.1), (0.1, 1.1)])

    def test_column_sum_mismatch_rejected(self):
        with pytest.raises(ColumnSumMismatch):
            build_experiment([(0.8, 0.2), (0.3, 0.8)])

    def test_renormalises_small_drift(self):
        drift = 5e-10
        exp = build_experiment([(0.8 + drift, 0.2), (0.2, 0.8)])
        assert math.fsum(o.p_L for o in exp.outcomes) == pytest.approx(1.0, abs=1e-15)

    def test_labels_from_half_interval_construction(self):
        exp = binary_experiment_from_labels(0.2, 0.8)
        flat = [mass for pair in exp.mass_pairs() for mass in pair]
        assert flat == pytest.approx([0.8, 0.2, 0.2, 0.8], abs=1e-12)


class TestPosterior:
    def test_high_signal_at_even_interim(self):
        exp = build_experiment(DEMO_PAIRS)
        assert posterior(0.5, exp.outcomes[1]) == pytest.approx(0.8, abs=1e-12)

    def test_uninformative_outcome_is_identity(self):
        outcome = build_experiment([(1.0, 1.0)]).outcomes[0]
        for psi in (0.1, 0.37, 0.9):
            assert posterior(psi, outcome) == pytest.approx(psi, abs=1e-12)

    def test_low_signal_at_adverse_interim(self):
        exp = build_experiment(DEMO_PAIRS)
        assert posterior(0.4, exp.outcomes[0]) == pytest.approx(1.0 / 7.0, abs=1e-12)

    def test_fully_revealing_gives_exact_one(self):
        exp = build_experiment([(1.0, 0.25), (0.0, 0.75)])
        assert posterior(1e-12, exp.outcomes[1]) == 1.0

    def test_degenerate_interim_absorbs(self):
        exp = build_experiment(DEMO_PAIRS)
        assert posterior(0.0, exp.outcomes[1]) == 0.0
        assert posterior(1.0, exp.outcomes[0]) == 1.0


class TestLocalSpread:
    def test_spread_high_outcome_of_demo(self):
        exp = build_experiment(DEMO_PAIRS)
        params = LocalSpreadParams(1, OddsRatio(1, 4), OddsRatio(9, 1))
        spread = apply_local_spread(exp, params)
        assert spread.m == 3
        down, up = spread.outcomes[1], spread.outcomes[2]
        (ol, oh), (ul, uh) = spread_mass_oracle(0.2, 0.8, 0.25, 9.0)
        assert (down.p_L, down.p_H) == pytest.approx((ol, oh), abs=1e-12)
        assert (up.p_L, up.p_H) == pytest.approx((ul, uh), abs=1e-12)
        assert (down.p_L, down.p_H) == pytest.approx((4 / 35, 1 / 35), abs=1e-12)
        assert (up.p_L, up.p_H) == pytest.approx((3 / 35, 27 / 35), abs=1e-12)
        assert down.p_H / down.p_L == pytest.approx(0.25, abs=1e-12)
        # the untouched bottom outcome keeps its masses
        assert (spread.outcomes[0].p_L, spread.outcomes[0].p_H) == pytest.approx((0.8, 0.2))

    def test_spread_uniform_single_outcome(self):
        exp = build_experiment([(1.0, 1.0)])
        spread = apply_local_spread(exp, LocalSpreadParams(0, OddsRatio(1, 2), OddsRatio(2, 1)))
        down, up = spread.outcomes
        assert (down.p_L, down.p_H) == pytest.approx((2 / 3, 1 / 3), abs=1e-12)
        assert (up.p_L, up.p_H) == pytest.approx((1 / 3, 2 / 3), abs=1e-12)

    def test_spread_low_outcome_of_demo(self):
        exp = build_experiment(DEMO_PAIRS)
        spread = apply_local_spread(exp, LocalSpreadParams(0, OddsRatio(1, 9), OddsRatio(4, 1)))
        down, up = spread.outcomes[0], spread.outcomes[1]
        (ol, oh), (ul, uh) = spread_mass_oracle(0.8, 0.2, 1 / 9, 4.0)
        assert (down.p_L, down.p_H) == pytest.approx((ol, oh), abs=1e-12)
        assert (up.p_L, up.p_H) == pytest.approx((ul, uh), abs=1e-12)
        assert (down.p_L, down.p_H) == pytest.approx((27 / 35, 3 / 35), abs=1e-12)
        assert (up.p_L, up.p_H) == pytest.approx((1 / 35, 4 / 35), abs=1e-12)

    def test_ratio_ordering_enforced(self):
        exp = build_experiment(DEMO_PAIRS)
        with pytest.raises(InfeasibleSpread):
            apply_local_spread(exp, LocalSpreadParams(1, OddsRatio(5, 1), OddsRatio(9, 1)))
        with pytest.raises(InfeasibleSpread):
            apply_local_spread(exp, LocalSpreadParams(0, OddsRatio(1, 9), OddsRatio(5, 1)))
        with pytest.raises(InfeasibleSpread):
            apply_local_spread(exp, LocalSpreadParams(1, OddsRatio(4, 1), OddsRatio(9, 1)))

    def test_spread_to_fully_revealing_top(self):
        exp = build_experiment(DEMO_PAIRS)
        spread = apply_local_spread(exp, LocalSpreadParams(1, OddsRatio(1, 4), OddsRatio(1, 0)))
        assert spread.outcomes[-1].p_L == 0.0
        assert spread.outcomes[-1].label == 1.0

    def test_original_is_garbling_of_spread(self):
        exp = build_experiment(DEMO_PAIRS)
        spread = apply_local_spread(exp, LocalSpreadParams(1, OddsRatio(1, 4), OddsRatio(9, 1)))
        assert is_garbling_of(exp, spread)

    def test_merge_recovers_original_after_duplicate_ratio_spread(self):
        # Spreading onto a ratio already present keeps outcomes distinct
        # until the merge utility pools them.
        exp = build_experiment([(0.5, 0.2), (0.3, 0.3), (0.2, 0.5)])
        lr_low = exp.likelihood_ratio(0)
        spread = apply_local_spread(exp, LocalSpreadParams(1, lr_low, OddsRatio(2, 1)))
        assert spread.m == 4
        merged = merge_equal_ratios(spread)
        assert merged.m == 3


class TestBlackwellBinary:
    def test_stronger_bad_news_dominates(self):
        better = binary_experiment_from_labels(0.1, 0.8)
        base = binary_experiment_from_labels(0.2, 0.8)
        assert is_blackwell_geq_binary(better, base)

    def test_reflexive(self):
        exp = build_experiment(DEMO_PAIRS)
        assert is_blackwell_geq_binary(exp, exp)

    def test_lower_top_label_fails(self):
        better = binary_experiment_from_labels(0.1, 0.7)
        base = binary_experiment_from_labels(0.2, 0.8)
        assert not is_blackwell_geq_binary(better, base)

    def test_not_binary_raises(self):
        ternary = build_experiment([(0.5, 0.2), (0.3, 0.3), (0.2, 0.5)])
        with pytest.raises(NotBinary):
            is_blackwell_geq_binary(ternary, build_experiment(DEMO_PAIRS))


class TestGarblingOf:
    def test_merge_of_two_lowest_outcomes(self):
        fine = build_experiment([(0.5, 0.2), (0.3, 0.3), (0.2, 0.5)])
        coarse = build_experiment([(0.8, 0.5), (0.2, 0.5)])
        assert is_garbling_of(coarse, fine)

    def test_identity(self):
        exp = build_experiment(DEMO_PAIRS)
        assert is_garbling_of(exp, exp)

    def test_fully_revealing_is_not_a_garbling_of_noisy(self):
        revealing = build_experiment([(1.0, 0.0), (0.0, 1.0)])
        assert not is_garbling_of(revealing, build_experiment(DEMO_PAIRS))


# Hypothesis strategies: bounded random experiments and feasible spreads.


@st.composite
def experiments(draw, max_m: int = 4):
    m = draw(st.integers(min_value=1, max_value=max_m))
    raw_l = draw(
        st.lists(st.floats(0.05, 1.0, allow_nan=False), min_size=m, max_size=m)
    )
    raw_h = draw(
        st.lists(st.floats(0.05, 1.0, allow_nan=False), min_size=m, max_size=m)
    )
    p_l = [x / sum(raw_l) for x in raw_l]
    p_h = [x / sum(raw_h) for x in raw_h]
    return build_experiment(list(zip(p_l, p_h)))


@st.composite
def experiments_with_spread(draw):
    exp = draw(experiments(max_m=4))
    j = draw(st.integers(min_value=0, max_value=exp.m - 1))
    labels = (0.0,) + exp.labels + (1.0,)
    lo_gap = labels[j + 1] - labels[j]
    hi_gap = labels[j + 2] - labels[j + 1]
    if lo_gap < 1e-6 or hi_gap < 1e-6:
        return None
    t_lo = draw(st.floats(0.05, 0.95))
    t_hi = draw(st.floats(0.05, 0.95))
    label_low = labels[j] + t_lo * lo_gap
    label_high = labels[j + 1] + t_hi * hi_gap
    params = LocalSpreadParams(
        j, OddsRatio.from_prob(label_low), OddsRatio.from_prob(label_high)
    )
    return exp, params


@given(experiments(), st.floats(0.01, 0.99))
@settings(max_examples=60)
def test_posterior_martingale(exp, psi):
    mixture = [psi * o.p_H + (1.0 - psi) * o.p_L for o in exp.outcomes]
    total = math.fsum(
        q * posterior(psi, o) for q, o in zip(mixture, exp.outcomes)
    )
    assert total == pytest.approx(psi, abs=1e-12)


@given(experiments())
@settings(max_examples=60)
def test_labels_nondecreasing(exp):
    assert all(a <= b + 1e-15 for a, b in zip(exp.labels, exp.labels[1:]))


@given(experiments_with_spread())
@settings(max_examples=40, deadline=None)
def test_spread_conserves_mass_and_refines(case):
    if case is None:
        return
    exp, params = case
    spread = apply_local_spread(exp, params)
    assert math.fsum(o.p_L for o in spread.outcomes) == pytest.approx(1.0, abs=1e-12)
    assert math.fsum(o.p_H for o in spread.outcomes) == pytest.approx(1.0, abs=1e-12)
    assert all(a <= b + 1e-12 for a, b in zip(spread.labels, spread.labels[1:]))
    assert is_garbling_of(exp, spread)
