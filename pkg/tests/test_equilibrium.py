"""Beliefs, best responses, the equilibrium chain, and surplus accounting."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import random_market
from seqmarket.equilibrium import (
    MarketSpec,
    Strategy,
    benchmarks,
    best_response,
    enumerate_equilibria,
    interim_belief,
    interim_from_rejections,
    is_optimal_against,
    least_selective,
    most_selective,
    rejection_probs,
    total_surplus,
)
from seqmarket.errors import DegeneratePrior, LengthMismatch
from seqmarket.experiment import binary_experiment_from_labels, build_experiment
from seqmarket.scenarios import demo_market, revealing_market, tight_market

SIGMA_SELECTIVE = Strategy((0.0, 1.0))
ACCEPT_ALL = Strategy((1.0, 1.0))
NEVER_ACCEPT = Strategy((0.0, 0.0))


class TestRejectionProbs:
    def test_selective_strategy(self):
        assert rejection_probs(demo_market(), SIGMA_SELECTIVE) == pytest.approx((0.8, 0.2))

    def test_accept_all(self):
        assert rejection_probs(demo_market(), ACCEPT_ALL) == pytest.approx((0.0, 0.0))

    def test_partial_acceptance(self):
        assert rejection_probs(demo_market(), Strategy((0.0, 0.5))) == pytest.approx((0.9, 0.6))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            rejection_probs(demo_market(), Strategy((0.0, 0.5, 1.0)))


class TestInterimBelief:
    def test_accept_all_keeps_prior(self):
        assert interim_belief(demo_market(), ACCEPT_ALL) == pytest.approx(0.5, abs=1e-12)

    def test_selective_strategy(self):
        assert interim_belief(demo_market(), SIGMA_SELECTIVE) == pytest.approx(0.4, abs=1e-12)

    def test_uninformative_experiment_keeps_prior(self):
        spec = MarketSpec(0.37, 0.2, 4, build_experiment([(0.5, 0.5), (0.5, 0.5)]))
        for sigma in (Strategy((0.2, 1.0)), Strategy((0.0, 0.0)), Strategy((1.0, 1.0))):
            assert interim_belief(spec, sigma) == pytest.approx(0.37, abs=1e-12)

    def test_never_accept_keeps_prior(self):
        assert interim_belief(demo_market(), NEVER_ACCEPT) == pytest.approx(0.5, abs=1e-12)


class TestTotalSurplus:
    def test_selective_strategy(self):
        assert total_surplus(demo_market(), SIGMA_SELECTIVE) == pytest.approx(0.348, abs=1e-12)

    def test_accept_all(self):
        assert total_surplus(demo_market(), ACCEPT_ALL) == pytest.approx(0.3, abs=1e-12)

    def test_never_accept_is_zero(self):
        assert total_surplus(demo_market(), NEVER_ACCEPT) == 0.0


class TestBenchmarks:
    def test_demo(self):
        bench = benchmarks(demo_market())
        assert (bench.no_info, bench.full_info) == pytest.approx((0.3, 0.4))

    def test_reservation_value_one(self):
        bench = benchmarks(MarketSpec(0.5, 1.0, 2, demo_market().experiment))
        assert (bench.no_info, bench.full_info) == (0.0, 0.0)

    def test_tight(self):
        bench = benchmarks(tight_market())
        assert (bench.no_info, bench.full_info) == pytest.approx((0.0, 0.2))


class TestBestResponse:
    def test_adverse_interim_splits_demo_signals(self):
        br = best_response(demo_market(), 0.4)
        assert br.must_reject == (0,)
        assert br.must_accept == (1,)
        assert br.indifferent == ()

    def test_prior_interim_leaves_low_signal_indifferent(self):
        br = best_response(demo_market(), 0.5)
        assert br.must_accept == (1,)
        assert br.indifferent == (0,)

    def test_zero_interim_rejects_everything(self):
        br = best_response(demo_market(), 0.0)
        assert br.must_reject == (0, 1)


class TestEnumerate:
    def test_demo_has_exactly_two_equilibria(self):
        chain = enumerate_equilibria(demo_market())
        assert len(chain) == 2
        assert chain[0].strategy.accept == (0.0, 1.0)
        assert chain[-1].strategy.accept == (1.0, 1.0)

    def test_tight_market_unique_at_every_n(self):
        for n in range(1, 21):
            chain = enumerate_equilibria(tight_market(n))
            assert len(chain) == 1
            assert chain[0].strategy.accept[0] == 0.0

    def test_single_buyer_threshold_at_prior(self):
        spec = demo_market(n=1)
        chain = enumerate_equilibria(spec)
        for eq in chain:
            assert eq.interim == pytest.approx(spec.rho, abs=1e-12)
            assert is_optimal_against(spec, eq.strategy, spec.rho)

    def test_degenerate_prior_rejected(self):
        with pytest.raises(DegeneratePrior):
            enumerate_equilibria(MarketSpec(1.0, 0.2, 2, demo_market().experiment))

    def test_most_and_least_selective_demo(self):
        assert most_selective(demo_market()).strategy.accept == (0.0, 1.0)
        assert least_selective(demo_market()).strategy.accept == (1.0, 1.0)

    def test_perfect_screening_collapses_the_chain(self):
        exp = build_experiment([(1.0, 0.0), (0.0, 1.0)])
        spec = MarketSpec(0.5, 0.3, 2, exp)
        chain = enumerate_equilibria(spec)
        assert len(chain) == 1
        assert chain[0].strategy.accept == (0.0, 1.0)
        assert chain[0].surplus == pytest.approx(benchmarks(spec).full_info, abs=1e-12)

    def test_revealing_market_has_two_equilibria(self):
        chain = enumerate_equilibria(revealing_market())
        assert len(chain) == 2
        assert chain[0].strategy.accept == (0.0, 1.0)
        assert chain[-1].strategy.accept == (1.0, 1.0)


def _market_zoo(count: int = 40) -> list[MarketSpec]:
    rng = np.random.default_rng(1217)
    return [random_market(rng) for _ in range(count)]


class TestChainInvariants:
    """Structural facts that must hold for every solved market."""

    @pytest.mark.parametrize("case", range(40))
    def test_chain_properties(self, case):
        spec = _market_zoo()[case]
        chain = enumerate_equilibria(spec)
        bench = benchmarks(spec)
        assert chain, "an equilibrium must exist"
        for eq in chain:
            assert eq.strategy.is_monotone()
            assert eq.interim <= spec.rho + 1e-12
            assert eq.r_H <= eq.r_L + 1e-12
            assert interim_belief(spec, eq.strategy) == pytest.approx(eq.interim, abs=1e-10)
            assert is_optimal_against(spec, eq.strategy, eq.interim)
            assert bench.no_info - 1e-9 <= eq.surplus <= bench.full_info + 1e-9
        for tighter, looser in zip(chain, chain[1:]):
            assert all(
                a <= b + 1e-12
                for a, b in zip(tighter.strategy.accept, looser.strategy.accept)
            )
            assert looser.surplus <= tighter.surplus + 1e-9


class TestBinaryStructure:
    def test_no_mixing_on_the_low_signal(self):
        rng = np.random.default_rng(20250811)
        for _ in range(25):
            spec = random_market(rng, m_choices=(2,))
            for eq in (most_selective(spec), least_selective(spec)):
                assert eq.strategy.accept[0] in (0.0, 1.0)

    def test_interim_decreases_in_high_acceptance(self):
        spec = demo_market(n=3)
        p_l, p_h = spec.experiment.p_L_array(), spec.experiment.p_H_array()
        alphas = np.linspace(0.0, 1.0, 101)
        psi = interim_from_rejections(
            spec.rho, 1.0 - alphas * p_l[1], 1.0 - alphas * p_h[1], spec.n
        )
        assert np.all(np.diff(psi) < 1e-15)
        assert psi[-1] < psi[0] - 1e-6

    def test_interim_increases_in_low_acceptance(self):
        spec = demo_market(n=3)
        p_l, p_h = spec.experiment.p_L_array(), spec.experiment.p_H_array()
        alphas = np.linspace(0.0, 1.0, 101)
        r_l = 1.0 - p_l[1] - alphas * p_l[0]
        r_h = 1.0 - p_h[1] - alphas * p_h[0]
        psi = interim_from_rejections(spec.rho, r_l, r_h, spec.n)
        assert np.all(np.diff(psi) > -1e-15)
        assert psi[-1] > psi[0] + 1e-6
