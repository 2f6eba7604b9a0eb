"""Bundled reference scenarios used by the repro command and the test suite."""

from __future__ import annotations

from .equilibrium import MarketSpec
from .experiment import build_experiment


def demo_market(n: int = 2) -> MarketSpec:
    """Two-buyer binary market: rho 0.5, c 0.2, masses 0.8/0.2."""
    return MarketSpec(0.5, 0.2, n, build_experiment([(0.8, 0.2), (0.2, 0.8)]))


def tight_market(n: int = 2) -> MarketSpec:
    """Same experiment, reservation value 0.6 (negative expected gains from trade)."""
    return MarketSpec(0.5, 0.6, n, build_experiment([(0.8, 0.2), (0.2, 0.8)]))


def revealing_market(n: int = 2) -> MarketSpec:
    """rho 0.5, c 0.2 with a fully revealing top outcome."""
    return MarketSpec(0.5, 0.2, n, build_experiment([(1.0, 0.25), (0.0, 0.75)]))
