"""Benchmarks and guarantees for seeding performance.

Two kinds of quantity live here: algorithm-independent benchmarks that
every schedule is measured against (`lb_peak`, `lb_avg`), and analytic
envelopes for specific planners (the two-sided average bounds, the line
peak bound, and the worst-case ratio guarantees for the cyclic and
minisum planners).

Caveats that matter in practice are documented on each function; the
short version is that the benchmarks are meant for modest initial ages on
graphs that are large relative to the seeding budget, and outside that
regime some of them are known to cross the true optimum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .aoi import DistanceMatrix, Horizon, SeedSchedule, baseline_average, discontinuities_linear
from .seeding import optimal_mu_sigma
from .graphs import sum_distance_vector

__all__ = [
    "AvgBounds",
    "BoundReport",
    "Guarantee",
    "LinePeakBound",
    "avg_approx_guarantee",
    "avg_two_sided_bounds",
    "lb_avg",
    "lb_peak",
    "lb_peak_max_distance",
    "line_peak_lower_bound",
    "minisum_objective",
    "optimal_delta",
    "peak_approx_guarantee",
]

logger = logging.getLogger(__name__)


def lb_peak(dm: DistanceMatrix, a0: float) -> float:
    """Mean-distance peak benchmark: ``a0 + 1 + mean pairwise travel time``.

    The mean runs over ordered node pairs. Valid as a lower bound on the
    optimal peak when the initial age is modest relative to the graph's
    reach; with a very large ``a0`` the true optimum can dip below it
    (the optimum is only forced above ``a0 + 1 + radius``).
    """
    n = dm.n
    if n < 2:
        raise ValueError("peak benchmark needs at least two nodes")
    return float(a0 + 1 + dm.dist.sum() / (n * (n - 1)))


def lb_peak_max_distance(dm: DistanceMatrix, a0: float) -> float:
    """Max-distance variant of the peak benchmark (diagnostic companion)."""
    if dm.n < 2:
        raise ValueError("peak benchmark needs at least two nodes")
    return float(a0 + 1 + dm.max_distance())


def minisum_objective(dm: DistanceMatrix, k: int) -> int:
    """Smallest total travel-time mass achievable by ``k`` distinct seeds."""
    if not 1 <= k <= dm.n:
        raise ValueError("k must lie in [1, n]")
    sums = np.sort(sum_distance_vector(dm))
    return int(sums[:k].sum())


def lb_avg(dm: DistanceMatrix, a0: float, delta: int, t_end: int, k: int) -> float:
    """Average-age benchmark from the two-sided bound machinery.

    Baseline plus the schedule-independent relaxations of the three
    seeding terms: minimal first-reach cost, uniform round gaps, and the
    best possible distance mass divided by the worst seed reach (the
    graph's maximum travel time). Shares the normalization of
    :func:`avg_two_sided_bounds`.
    """
    n = dm.n
    if n < 2:
        raise ValueError("average benchmark needs at least two nodes")
    diam = dm.max_distance()
    p1 = minisum_objective(dm, k)
    extra = 2 * a0 * delta + (k - 1) ** 2 * delta**2 / k + 2 * delta * p1 / (n * diam)
    return baseline_average(a0, delta, t_end, k) + extra / (2 * t_end)


class LinePeakBound(NamedTuple):
    value: float
    xi_floor: int
    xi: float


def line_peak_lower_bound(delta: int, a0: float, mu: int, sigma: int) -> LinePeakBound:
    """Peak floor for line networks in the periodic seeding regime.

    ``xi`` is the positive root of ``delta*x**2 + (1+3*delta)*x = 1 +
    2*mu*delta``; the bound is ``max(a0 + sigma, floor(xi)*delta) + 1 +
    mu*delta``. Known gap: on very short lines the coverage constraint
    behind ``mu`` overcounts, and the floor can exceed the true optimum.
    """
    target = 1 + 2 * mu * delta
    x = 0
    while delta * (x + 1) ** 2 + (1 + 3 * delta) * (x + 1) <= target:
        x += 1
    xi = (-(1 + 3 * delta) + ((1 + 3 * delta) ** 2 + 4 * delta * target) ** 0.5) / (2 * delta)
    value = max(a0 + sigma, x * delta) + 1 + mu * delta
    return LinePeakBound(value=float(value), xi_floor=x, xi=xi)


@dataclass(frozen=True)
class AvgBounds:
    """Two-sided envelope of the exact average age for one schedule."""

    lower: float
    upper: float
    beta: int
    sum_updates: int


def avg_two_sided_bounds(sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> AvgBounds:
    """Closed-form sandwich around the exact average age.

    Both sides start from the baseline term. The lower side relaxes the
    per-node terms with the minimal first reach, the harmonic-mean bound
    on squared gaps (``n*(k-1)^2*delta^2 / sum_i k_i``), and the distance
    mass divided by the worst seed reach ``beta`` (clamped to at least 1).
    The upper side uses the first round's distances, the single-gap worst
    case, and the full distance mass.

    The lower side can graze the exact value from above in the corner
    where a surviving round seeds the node itself (zero travel time);
    empirically the aggregate slack covers it on random instances.
    """
    k = sched.k
    delta = sched.delta
    a0 = horizon.scalar_a0()
    t_end = horizon.end
    n = dm.n
    dist_by_round = np.array(
        [[min(int(dm.dist[s, v]) for s in r) for v in range(n)] for r in sched.rounds],
        dtype=np.int64,
    )
    beta = max(int(dist_by_round.max()), 1)
    sum_updates = sum(
        discontinuities_linear(v, sched, dm).count for v in range(n)
    )
    mass = int(dist_by_round.sum())
    first = int(dist_by_round[0].sum())
    base = baseline_average(a0, delta, t_end, k)
    lower = base + (
        2 * a0 * delta
        + n * (k - 1) ** 2 * delta**2 / sum_updates
        + 2 * delta * mass / (n * beta)
    ) / (2 * t_end)
    upper = base + (
        2 * a0 * delta
        + (k - 1) ** 2 * delta**2
        + 2 * a0 * first / n
        + 2 * delta * mass / n
    ) / (2 * t_end)
    return AvgBounds(lower=lower, upper=upper, beta=beta, sum_updates=sum_updates)


class Guarantee(NamedTuple):
    value: float
    raw: float


def peak_approx_guarantee(diam_len: int, a0: float, delta: int) -> Guarantee:
    """Worst-case peak ratio of the cyclic planner on a given reach.

    ``(diam + a0)`` over the line peak floor for the planner's own
    ``(mu, sigma)``. The raw quotient can dip below 1 on reaches where
    the floor overshoots; the reported value clips at 1.
    """
    mu, sigma = optimal_mu_sigma(diam_len, delta)
    floor = line_peak_lower_bound(delta, a0, mu, sigma)
    raw = (diam_len + a0) / floor.value
    logger.debug("peak guarantee raw=%.6f for diam=%d a0=%s delta=%d", raw, diam_len, a0, delta)
    return Guarantee(value=max(raw, 1.0), raw=raw)


def avg_approx_guarantee(beta: int, a0: float, k: int, delta: int, t_end: int) -> Guarantee:
    """Worst-case average ratio of the minisum planner.

    Maximum of the reach-driven arm ``beta + a0*beta/(k*delta)`` and the
    gap-driven arm built from the baseline term.
    """
    if beta < 1:
        raise ValueError("beta must be at least 1")
    base = baseline_average(a0, delta, t_end, k)
    arm_reach = beta + a0 * beta / (k * delta)
    arm_gap = (2 * a0 * delta + base + (k - 1) ** 2 * delta**2) / (
        2 * a0 * delta + base + (k - 1) ** 2 * delta**2 / k
    )
    raw = max(arm_reach, arm_gap)
    logger.debug("avg guarantee raw=%.6f (reach=%.6f gap=%.6f)", raw, arm_reach, arm_gap)
    return Guarantee(value=max(raw, 1.0), raw=raw)


def optimal_delta(a0: float, k: int, t_end: int) -> float:
    """Promotion interval minimizing the baseline term for fixed ``k``.

    Stationary point of the baseline in the interval length:
    ``a0/(k-1)**2 + (t_end-1)/(k-1)``. Needs ``k >= 2``; with one round
    the baseline is monotone and there is nothing to optimize.
    """
    if k < 2:
        raise ValueError("optimal interval needs at least two rounds")
    return a0 / (k - 1) ** 2 + (t_end - 1) / (k - 1)


@dataclass(frozen=True)
class BoundReport:
    """Bound values the experiment harness attaches to each sweep point."""

    lb_peak: float
    lb_avg: float
    avg_lower: float
    avg_upper: float
    peak_guarantee: float
    avg_guarantee: float
    beta: int
    xi_floor: int
