"""Surplus-maximising coarsening of buyers' information.

A monotone binary garbling pools the experiment's outcomes into a reject /
accept recommendation by a threshold row, splitting at most one row.  The
family is parameterised by the total accept weight ``D`` (a bijection onto
``[0, m]``; smaller ``D`` means more selective).  Along ``D`` the obeyed
surplus is unimodal with its peak where the irrelevance margin ``F`` changes
sign, which is what the optimiser exploits: it returns the least selective
garbling under which adverse selection is irrelevant when that garbling's
recommendations are incentive compatible, and otherwise the better of the
nearest IC points on either side of the peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamOutOfRange
from .equilibrium import (
    INDIFFERENCE_TOL,
    MarketSpec,
    geometric_sum,
    interim_from_rejections,
    surplus_from_rejections,
)
from .experiment import FiniteExperiment, OddsRatio, build_experiment

IC_REFINE_TOL = 1e-12


@dataclass(frozen=True)
class MonotoneBinaryGarbling:
    """Threshold coarsening of ``base`` with total accept weight ``D``."""

    base: FiniteExperiment
    D: float
    accept_weights: tuple[float, ...]  # t_{i2}, ascending likelihood-ratio order
    threshold_index: int  # the row read as the threshold signal s*
    reject_L: float
    reject_H: float
    accept_L: float
    accept_H: float

    @property
    def mixing_weight(self) -> float:
        """Fraction of the threshold row mapped to the accept recommendation."""
        return float(self.accept_weights[self.threshold_index])

    @property
    def threshold_label(self) -> float:
        return self.base.outcomes[self.threshold_index].label

    def coarse_experiment(self) -> FiniteExperiment:
        """The induced two-outcome experiment (degenerate columns dropped)."""
        return build_experiment(
            [(self.reject_L, self.reject_H), (self.accept_L, self.accept_H)]
        )


def _accept_weights(m: int, d) -> np.ndarray:
    d_arr = np.asarray(d, dtype=float)
    offsets = m - 1 - np.arange(m)
    return np.clip(d_arr[..., None] - offsets, 0.0, 1.0)


def _threshold_row(m: int, d) -> np.ndarray:
    # Left-limit convention: for D in (k, k+1] the split row is m-1-k; at
    # D == 0 the threshold is read at the top row.
    d_arr = np.asarray(d, dtype=float)
    seg = np.maximum(np.ceil(d_arr).astype(int), 1)
    return np.clip(m - seg, 0, m - 1)


def garbling_from_param(exp: FiniteExperiment, d: float) -> MonotoneBinaryGarbling:
    """The monotone binary garbling with accept weight ``d`` in ``[0, m]``."""
    if not 0.0 <= d <= exp.m:
        raise ParamOutOfRange(f"garbling parameter {d} outside [0, {exp.m}]")
    weights = _accept_weights(exp.m, np.asarray([d]))[0]
    accept_l = float(weights @ exp.p_L_array())
    accept_h = float(weights @ exp.p_H_array())
    return MonotoneBinaryGarbling(
        base=exp,
        D=float(d),
        accept_weights=tuple(float(w) for w in weights),
        threshold_index=int(_threshold_row(exp.m, np.asarray([d]))[0]),
        reject_L=max(0.0, 1.0 - accept_l),
        reject_H=max(0.0, 1.0 - accept_h),
        accept_L=accept_l,
        accept_H=accept_h,
    )


def obeyed_surplus(spec: MarketSpec, g: MonotoneBinaryGarbling) -> float:
    """Total surplus when every buyer follows the recommendations."""
    return float(surplus_from_rejections(spec, g.reject_L, g.reject_H))


def is_ic(spec: MarketSpec, g: MonotoneBinaryGarbling) -> bool:
    """Whether obeying the recommendations is an equilibrium of the induced game.

    Rejecting on the reject recommendation and accepting on the accept
    recommendation must each be optimal at the consistent interim belief;
    a recommendation that is never issued imposes no condition.
    """
    psi = float(interim_from_rejections(spec.rho, g.reject_L, g.reject_H, spec.n))
    if g.reject_L + g.reject_H > 0.0:
        gap = psi * g.reject_H * (1.0 - spec.c) - (1.0 - psi) * g.reject_L * spec.c
        if gap > INDIFFERENCE_TOL:
            return False
    if g.accept_L + g.accept_H > 0.0:
        gap = psi * g.accept_H * (1.0 - spec.c) - (1.0 - psi) * g.accept_L * spec.c
        if gap < -INDIFFERENCE_TOL:
            return False
    return True


def _cost_odds(spec: MarketSpec) -> float:
    return spec.c / (1.0 - spec.c) if spec.c < 1.0 else math.inf


def _margin_value(spec: MarketSpec, g: MonotoneBinaryGarbling) -> float:
    """The irrelevance margin read as a finite left limit everywhere.

    Interior: prior odds times the threshold row's likelihood ratio times the
    rejection-odds ratio to the ``n - 1``, minus the reservation odds.  With
    no rejection mass (``D == m``) the rejection-odds ratio degenerates to the
    bottom row's likelihood ratio, its limit along the top segment; with no
    acceptance mass (``D == 0``) it degenerates to 1, its limit from above.
    """
    lr_star = g.base.likelihood_ratio(g.threshold_index)
    if g.reject_L == 0.0 and g.reject_H == 0.0:
        ratio = g.base.likelihood_ratio(0)
    elif g.accept_L + g.accept_H == 0.0:
        ratio = OddsRatio(1.0, 1.0)
    else:
        ratio = OddsRatio(g.reject_H, g.reject_L)
    prod = OddsRatio.from_prob(spec.rho).times(lr_star).times(ratio.pow(spec.n - 1))
    return prod.as_float() - _cost_odds(spec)


def irrelevance_margin(spec: MarketSpec, g: MonotoneBinaryGarbling) -> float:
    """Signed irrelevance margin ``F``; +inf when nothing is ever rejected."""
    if g.reject_L == 0.0 and g.reject_H == 0.0:
        return math.inf
    return _margin_value(spec, g)


def _never_reject_irrelevant(spec: MarketSpec) -> bool:
    """Irrelevance clause for a garbling that recommends no rejections:
    even ``n`` bottom signals would leave trade weakly profitable."""
    bottom = spec.experiment.likelihood_ratio(0)
    lhs = OddsRatio.from_prob(spec.rho).times(bottom.pow(spec.n))
    return lhs.geq(OddsRatio.from_prob(spec.c))


def is_irrelevant(spec: MarketSpec, g: MonotoneBinaryGarbling) -> bool:
    """Adverse-selection irrelevance of a garbling.

    Holds if the margin is nonnegative, if the garbling never recommends an
    acceptance, or if it never recommends a rejection and even the worst
    possible signal profile leaves trade weakly profitable.  The last clause
    can disagree with the +inf margin convention; both readings are exposed
    so reports can show the disagreement rather than hide it.
    """
    if g.accept_L + g.accept_H == 0.0:
        return True
    if g.reject_L + g.reject_H == 0.0:
        return _never_reject_irrelevant(spec)
    return _margin_value(spec, g) >= 0.0


@dataclass(frozen=True)
class GarblingReport:
    garbling: MonotoneBinaryGarbling
    is_ic: bool
    is_irrelevant: bool
    irrelevance_margin: float
    obeyed_surplus: float


def report_at(spec: MarketSpec, d: float) -> GarblingReport:
    g = garbling_from_param(spec.experiment, d)
    return GarblingReport(
        garbling=g,
        is_ic=is_ic(spec, g),
        is_irrelevant=is_irrelevant(spec, g),
        irrelevance_margin=irrelevance_margin(spec, g),
        obeyed_surplus=obeyed_surplus(spec, g),
    )


def _margin_at(spec: MarketSpec, d: float) -> float:
    return _margin_value(spec, garbling_from_param(spec.experiment, d))


def max_irrelevant_param(spec: MarketSpec) -> float:
    """The largest ``D`` whose garbling leaves adverse selection irrelevant.

    The finite-limit margin is decreasing within each unit segment of ``D``
    and jumps weakly downward at integers, so the maximiser is found by
    scanning segments from the top and bisecting inside the first segment
    whose left end is nonnegative.  ``D == 0`` always qualifies (acceptance
    is never recommended there).
    """
    m = spec.experiment.m
    cost = _cost_odds(spec)
    for seg in range(m, 0, -1):
        if _margin_at(spec, float(seg)) >= 0.0:
            return float(seg)
        # Left-end value of this segment: threshold row m - seg, rejection
        # masses of the integer garbling just below.
        at_left = garbling_from_param(spec.experiment, float(seg - 1))
        if at_left.reject_L == 0.0 and at_left.reject_H == 0.0:
            ratio = spec.experiment.likelihood_ratio(0)
        else:
            ratio = OddsRatio(at_left.reject_H, at_left.reject_L)
        lr_star = spec.experiment.likelihood_ratio(m - seg)
        f_left = (
            OddsRatio.from_prob(spec.rho)
            .times(lr_star)
            .times(ratio.pow(spec.n - 1))
            .as_float()
            - cost
        )
        if f_left < 0.0:
            continue
        lo, hi = float(seg - 1), float(seg)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if _margin_at(spec, mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        return lo
    return 0.0


def _ic_ok(spec: MarketSpec, d: float) -> bool:
    return is_ic(spec, garbling_from_param(spec.experiment, d))


def ic_intervals(spec: MarketSpec, scan_per_segment: int = 512) -> tuple[tuple[float, float], ...]:
    """The set of ``D`` with incentive-compatible recommendations, as closed
    intervals.  Both IC margins are continuous in ``D``, so a dense scan with
    bisection-refined boundaries recovers the set to ``IC_REFINE_TOL``."""
    m = spec.experiment.m
    grid = np.linspace(0.0, float(m), m * scan_per_segment + 1)
    ok = [_ic_ok(spec, float(d)) for d in grid]
    intervals: list[list[float]] = []
    for i, (d, good) in enumerate(zip(grid, ok)):
        if not good:
            continue
        if i == 0 or not ok[i - 1]:
            lo = float(d)
            if i > 0:
                a, b = float(grid[i - 1]), float(d)
                while b - a > IC_REFINE_TOL:
                    mid = 0.5 * (a + b)
                    if _ic_ok(spec, mid):
                        b = mid
                    else:
                        a = mid
                lo = b
            intervals.append([lo, lo])
        hi = float(d)
        if i + 1 < len(grid) and not ok[i + 1]:
            a, b = float(d), float(grid[i + 1])
            while b - a > IC_REFINE_TOL:
                mid = 0.5 * (a + b)
                if _ic_ok(spec, mid):
                    a = mid
                else:
                    b = mid
            hi = a
        intervals[-1][1] = hi
    return tuple((lo, hi) for lo, hi in intervals)


def optimal_garbling(spec: MarketSpec) -> GarblingReport:
    """The regulator's surplus-maximising monotone binary garbling.

    Obeyed surplus is unimodal in ``D`` and peaks at the largest irrelevant
    parameter ``D*``.  If that garbling is IC it is optimal; otherwise the
    optimum is the better of the largest IC parameter at or below ``D*`` and
    the smallest IC parameter at or above it, with ties broken toward the
    more selective garbling.
    """
    spec.require_interior_prior()
    d_star = max_irrelevant_param(spec)
    if _ic_ok(spec, d_star):
        return report_at(spec, d_star)
    below: float | None = None
    above: float | None = None
    for lo, hi in ic_intervals(spec):
        if lo <= d_star:
            cand = min(hi, d_star)
            below = cand if below is None else max(below, cand)
        if hi >= d_star:
            cand = max(lo, d_star)
            above = cand if above is None else min(above, cand)
    candidates = [d for d in (below, above) if d is not None]
    if not candidates:
        raise RuntimeError("no incentive-compatible garbling found; solver defect")
    best = max(
        candidates,
        key=lambda d: (obeyed_surplus(spec, garbling_from_param(spec.experiment, d)), -d),
    )
    return report_at(spec, best)


def grid_diagnostics(spec: MarketSpec, d_values: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised per-parameter diagnostics for a whole ``D`` grid.

    Returns arrays keyed ``D, threshold_label, mixing_weight, is_ic,
    is_irrelevant, margin, obeyed_surplus`` in grid order.
    """
    m = spec.experiment.m
    d = np.asarray(d_values, dtype=float)
    p_l, p_h = spec.experiment.p_L_array(), spec.experiment.p_H_array()
    weights = _accept_weights(m, d)
    accept_l = weights @ p_l
    accept_h = weights @ p_h
    reject_l = np.maximum(0.0, 1.0 - accept_l)
    reject_h = np.maximum(0.0, 1.0 - accept_h)
    rows = _threshold_row(m, d)
    labels = np.asarray(spec.experiment.labels)[rows]
    mixing = np.take_along_axis(weights, rows[:, None], axis=1)[:, 0]

    psi_num = spec.rho * geometric_sum(reject_h, spec.n)
    psi_den = (1.0 - spec.rho) * geometric_sum(reject_l, spec.n)
    psi = psi_num / (psi_num + psi_den)
    reject_gap = psi * reject_h * (1.0 - spec.c) - (1.0 - psi) * reject_l * spec.c
    accept_gap = psi * accept_h * (1.0 - spec.c) - (1.0 - psi) * accept_l * spec.c
    ic = np.where(
        reject_l + reject_h > 0.0, reject_gap <= INDIFFERENCE_TOL, True
    ) & np.where(accept_l + accept_h > 0.0, accept_gap >= -INDIFFERENCE_TOL, True)

    with np.errstate(divide="ignore", invalid="ignore"):
        lr_row = np.asarray(
            [spec.experiment.likelihood_ratio(int(r)).as_float() for r in range(m)]
        )[rows]
        ratio = np.where(reject_l > 0.0, reject_h / np.where(reject_l > 0.0, reject_l, 1.0), np.nan)
        bottom_lr = spec.experiment.likelihood_ratio(0).as_float()
        ratio = np.where(reject_l + reject_h == 0.0, bottom_lr, ratio)
        ratio = np.where(accept_l + accept_h == 0.0, 1.0, ratio)
        prior_odds = spec.rho / (1.0 - spec.rho)
        margin = prior_odds * lr_row * ratio ** (spec.n - 1) - _cost_odds(spec)
        finite_margin = margin.copy()
        margin = np.where(reject_l + reject_h == 0.0, np.inf, margin)

    never_reject_ok = _never_reject_irrelevant(spec)
    irrelevant = np.where(
        accept_l + accept_h == 0.0,
        True,
        np.where(reject_l + reject_h == 0.0, never_reject_ok, finite_margin >= 0.0),
    )
    surplus = surplus_from_rejections(spec, reject_l, reject_h)
    return {
        "D": d,
        "threshold_label": labels,
        "mixing_weight": mixing,
        "is_ic": ic,
        "is_irrelevant": irrelevant,
        "margin": margin,
        "obeyed_surplus": surplus,
    }


def garbling_grid(spec: MarketSpec, num_points: int) -> list[GarblingReport]:
    """Diagnostic reports on a uniform ``D`` grid (inclusive endpoints)."""
    grid = np.linspace(0.0, float(spec.experiment.m), num_points)
    return [report_at(spec, float(d)) for d in grid]
