"""Rejection probabilities, interim beliefs, best responses, and the
equilibrium chain of the sequential-visit trading game.

A market has ``n`` buyers who share a prior ``rho`` on High quality; the
seller visits them in uniformly random order and trades with the first one
who accepts at his reservation value ``c``.  A visited buyer conditions on
the visit itself (all earlier buyers rejected) to form an interim belief,
then on her private signal.  Equilibria are monotone cutoff strategies; the
solver scans every pure cutoff and every mixing cutoff root and returns the
full chain, sorted most selective first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePrior, LengthMismatch, NoEquilibriumFound
from .experiment import FiniteExperiment

INDIFFERENCE_TOL = 1e-9
MIXING_ROOT_TOL = 1e-12
DEFAULT_MIXING_GRID = 1024


@dataclass(frozen=True)
class MarketSpec:
    """Market primitives: prior, reservation value, buyer count, experiment."""

    rho: float
    c: float
    n: int
    experiment: FiniteExperiment

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho <= 1.0:
            raise DegeneratePrior(f"rho={self.rho} outside [0, 1]")
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"c={self.c} outside [0, 1]")
        if self.n < 1:
            raise ValueError(f"n={self.n} must be at least 1")

    def with_n(self, n: int) -> "MarketSpec":
        return MarketSpec(self.rho, self.c, n, self.experiment)

    def with_experiment(self, experiment: FiniteExperiment) -> "MarketSpec":
        return MarketSpec(self.rho, self.c, self.n, experiment)

    def require_interior_prior(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise DegeneratePrior(f"equilibrium routines need rho in (0, 1), got {self.rho}")


@dataclass(frozen=True)
class Strategy:
    """Per-outcome acceptance probabilities, indexed in likelihood-ratio order."""

    accept: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(not 0.0 <= a <= 1.0 for a in self.accept):
            raise ValueError(f"acceptance probabilities must lie in [0, 1]: {self.accept}")

    @property
    def m(self) -> int:
        return len(self.accept)

    def is_monotone(self) -> bool:
        for i, a in enumerate(self.accept):
            if a > 0.0 and any(b < 1.0 for b in self.accept[i + 1 :]):
                return False
        return True

    def as_array(self) -> np.ndarray:
        return np.asarray(self.accept, dtype=float)

    @staticmethod
    def cutoff(m: int, index: int, mixing: float = 1.0) -> "Strategy":
        """Monotone strategy: reject below ``index``, accept ``mixing`` there, accept above."""
        if index >= m:
            return Strategy((0.0,) * m)
        accept = [0.0] * index + [mixing] + [1.0] * (m - index - 1)
        return Strategy(tuple(accept))


@dataclass(frozen=True)
class Benchmarks:
    full_info: float
    no_info: float


@dataclass(frozen=True)
class Equilibrium:
    strategy: Strategy
    interim: float
    r_L: float
    r_H: float
    surplus: float
    cutoff_index: int  # first outcome accepted with positive probability; m if none
    mixing_prob: float  # acceptance probability at the cutoff outcome (0.0 if none)


@dataclass(frozen=True)
class BestResponse:
    """Outcome partition implied by an interim belief."""

    must_reject: tuple[int, ...]
    must_accept: tuple[int, ...]
    indifferent: tuple[int, ...]


def _check_length(spec: MarketSpec, strategy: Strategy) -> None:
    if strategy.m != spec.experiment.m:
        raise LengthMismatch(
            f"strategy has {strategy.m} entries for an experiment with {spec.experiment.m} outcomes"
        )


def geometric_sum(r, n: int):
    """``sum_{k=0}^{n-1} r**k`` for scalars or arrays, stable near ``r == 1``."""
    r_arr = np.asarray(r, dtype=float)
    near_one = np.abs(1.0 - r_arr) < 1e-10
    safe = np.where(near_one, 0.5, r_arr)
    closed = (1.0 - safe**n) / (1.0 - safe)
    taylor = n * (1.0 - (n - 1) * (1.0 - r_arr) / 2.0)
    out = np.where(near_one, taylor, closed)
    return float(out) if np.isscalar(r) or out.ndim == 0 else out


def rejection_probs(spec: MarketSpec, strategy: Strategy) -> tuple[float, float]:
    """Per-visit rejection probabilities ``(r_L, r_H)``."""
    _check_length(spec, strategy)
    sigma = strategy.as_array()
    r_l = 1.0 - float(spec.experiment.p_L_array() @ sigma)
    r_h = 1.0 - float(spec.experiment.p_H_array() @ sigma)
    clip = lambda x: min(1.0, max(0.0, x))
    return clip(r_l), clip(r_h)


def interim_from_rejections(rho: float, r_L, r_H, n: int):
    """Interim belief consistent with the given per-visit rejection probabilities."""
    num = rho * geometric_sum(r_H, n)
    den = (1.0 - rho) * geometric_sum(r_L, n)
    return num / (num + den)


def interim_belief(spec: MarketSpec, strategy: Strategy) -> float:
    """The unique interim belief consistent with everyone using ``strategy``."""
    r_l, r_h = rejection_probs(spec, strategy)
    return float(interim_from_rejections(spec.rho, r_l, r_h, spec.n))


def total_surplus(spec: MarketSpec, strategy: Strategy) -> float:
    """Expected gains from trade: ``(1-c)`` per High trade minus ``c`` per Low trade."""
    r_l, r_h = rejection_probs(spec, strategy)
    return float(surplus_from_rejections(spec, r_l, r_h))


def surplus_from_rejections(spec: MarketSpec, r_L, r_H):
    return (1.0 - spec.c) * spec.rho * (1.0 - np.asarray(r_H) ** spec.n) - spec.c * (
        1.0 - spec.rho
    ) * (1.0 - np.asarray(r_L) ** spec.n)


def benchmarks(spec: MarketSpec) -> Benchmarks:
    return Benchmarks(
        full_info=spec.rho * (1.0 - spec.c),
        no_info=max(0.0, spec.rho - spec.c),
    )


def _acceptance_gaps(spec: MarketSpec, interim: float) -> np.ndarray:
    """Cross-multiplied posterior-vs-c comparison, one entry per outcome.

    Positive means the posterior strictly exceeds the reservation value.  All
    factors are probabilities, so the absolute indifference tolerance applies
    on a bounded scale.
    """
    p_l = spec.experiment.p_L_array()
    p_h = spec.experiment.p_H_array()
    return interim * p_h * (1.0 - spec.c) - (1.0 - interim) * p_l * spec.c


def best_response(spec: MarketSpec, interim: float) -> BestResponse:
    """Partition outcomes into must-reject / must-accept / indifferent."""
    gaps = _acceptance_gaps(spec, interim)
    reject = tuple(int(j) for j in np.flatnonzero(gaps < -INDIFFERENCE_TOL))
    accept = tuple(int(j) for j in np.flatnonzero(gaps > INDIFFERENCE_TOL))
    indiff = tuple(
        int(j) for j in np.flatnonzero(np.abs(gaps) <= INDIFFERENCE_TOL)
    )
    return BestResponse(reject, accept, indiff)


def is_optimal_against(spec: MarketSpec, strategy: Strategy, interim: float) -> bool:
    """Whether ``strategy`` is a best response to ``interim`` (indifference tolerated)."""
    gaps = _acceptance_gaps(spec, interim)
    for a, gap in zip(strategy.accept, gaps):
        if a == 0.0:
            ok = gap <= INDIFFERENCE_TOL
        elif a == 1.0:
            ok = gap >= -INDIFFERENCE_TOL
        else:
            ok = abs(gap) <= INDIFFERENCE_TOL
        if not ok:
            return False
    return True


def _mixing_gap_curve(
    spec: MarketSpec, j: int, alphas: np.ndarray
) -> np.ndarray:
    """Indifference gap at outcome ``j`` for cutoff-``j`` strategies with mixing ``alphas``."""
    p_l = spec.experiment.p_L_array()
    p_h = spec.experiment.p_H_array()
    tail_l = float(p_l[j + 1 :].sum())
    tail_h = float(p_h[j + 1 :].sum())
    r_l = 1.0 - tail_l - alphas * p_l[j]
    r_h = 1.0 - tail_h - alphas * p_h[j]
    psi = interim_from_rejections(spec.rho, r_l, r_h, spec.n)
    return psi * p_h[j] * (1.0 - spec.c) - (1.0 - psi) * p_l[j] * spec.c


def _solve_equilibrium_record(spec: MarketSpec, strategy: Strategy) -> Equilibrium:
    psi = interim_belief(spec, strategy)
    r_l, r_h = rejection_probs(spec, strategy)
    cutoff = next((i for i, a in enumerate(strategy.accept) if a > 0.0), strategy.m)
    mixing = strategy.accept[cutoff] if cutoff < strategy.m else 0.0
    return Equilibrium(
        strategy=strategy,
        interim=psi,
        r_L=r_l,
        r_H=r_h,
        surplus=total_surplus(spec, strategy),
        cutoff_index=cutoff,
        mixing_prob=mixing,
    )


def enumerate_equilibria(
    spec: MarketSpec, mixing_grid: int = DEFAULT_MIXING_GRID
) -> tuple[Equilibrium, ...]:
    """All monotone-cutoff equilibria, sorted most selective first.

    Every pure cutoff (including never-accept) is kept when optimal against
    its consistent belief.  For each cutoff with an interior acceptance
    probability, the indifference gap is evaluated on a uniform grid and each
    sign change is refined by bisection; all roots are kept because the
    interim belief need not be monotone in the mixing probability for general
    experiments.  Near-duplicates (within 1e-9 pointwise) are pooled.
    """
    spec.require_interior_prior()
    m = spec.experiment.m
    found: list[Strategy] = []

    for j in range(m + 1):
        sigma = Strategy.cutoff(m, j)
        if is_optimal_against(spec, sigma, interim_belief(spec, sigma)):
            found.append(sigma)

    alphas = np.linspace(0.0, 1.0, mixing_grid + 1)
    for j in range(m):
        gaps = _mixing_gap_curve(spec, j, alphas)
        roots: list[float] = []
        for k in range(mixing_grid):
            g0, g1 = gaps[k], gaps[k + 1]
            if g0 == 0.0 and 0.0 < alphas[k] < 1.0:
                roots.append(float(alphas[k]))
            if g0 * g1 < 0.0:
                roots.append(_bisect_mixing(spec, j, float(alphas[k]), float(alphas[k + 1])))
        for alpha in roots:
            if not 0.0 < alpha < 1.0:
                continue
            sigma = Strategy.cutoff(m, j, alpha)
            if is_optimal_against(spec, sigma, interim_belief(spec, sigma)):
                found.append(sigma)

    deduped: list[Strategy] = []
    for sigma in found:
        arr = sigma.as_array()
        if any(np.max(np.abs(arr - other.as_array())) <= 1e-9 for other in deduped):
            continue
        deduped.append(sigma)
    if not deduped:
        raise NoEquilibriumFound(f"no equilibrium found for {spec}")

    deduped.sort(key=lambda s: sum(s.accept))
    for a, b in zip(deduped, deduped[1:]):
        if not all(x <= y + 1e-12 for x, y in zip(a.accept, b.accept)):
            raise NoEquilibriumFound("equilibrium set is not a selectivity chain")
    return tuple(_solve_equilibrium_record(spec, s) for s in deduped)


def _bisect_mixing(spec: MarketSpec, j: int, lo: float, hi: float) -> float:
    g = lambda a: float(_mixing_gap_curve(spec, j, np.asarray([a]))[0])
    g_lo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) <= MIXING_ROOT_TOL or hi - lo < 1e-16:
            return mid
        if (g_lo < 0.0) == (g_mid < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def most_selective(spec: MarketSpec, mixing_grid: int = DEFAULT_MIXING_GRID) -> Equilibrium:
    return enumerate_equilibria(spec, mixing_grid)[0]


def least_selective(spec: MarketSpec, mixing_grid: int = DEFAULT_MIXING_GRID) -> Equilibrium:
    return enumerate_equilibria(spec, mixing_grid)[-1]


def select_equilibrium(spec: MarketSpec, selector: str) -> Equilibrium:
    """``selector`` is ``"most"`` or ``"least"`` (selective)."""
    if selector not in ("most", "least"):
        raise ValueError(f"selector must be 'most' or 'least', got {selector!r}")
    chain = enumerate_equilibria(spec)
    return chain[0] if selector == "most" else chain[-1]


def single_buyer_surplus(rho: float, c: float, experiment: FiniteExperiment) -> float:
    """Equilibrium surplus with one buyer, in closed form.

    With no adverse selection the interim belief equals the prior, so the
    buyer accepts exactly where her posterior beats the reservation value;
    indifferent outcomes contribute nothing either way.
    """
    p_l = experiment.p_L_array()
    p_h = experiment.p_H_array()
    gains = rho * p_h * (1.0 - c) - (1.0 - rho) * p_l * c
    return float(np.maximum(gains, 0.0).sum())
