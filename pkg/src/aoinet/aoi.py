"""Age-of-information dynamics under multi-round seeding.

A schedule promotes fresh information to chosen seed nodes every ``delta``
time slots; information then spreads along edges, one slot per unit of
delay, and every node keeps whatever is freshest. A node's age grows at
unit rate between updates and drops when strictly fresher information
arrives, so each age curve is piecewise linear with unit slope.

The module provides two independent views of those dynamics:

* a discrete-time message-passing simulator (`simulate_oracle`), which
  knows nothing about the closed forms below and is used to validate them;
* closed-form machinery built on the drop times of each node: the per-node
  update rounds that survive domination (`discontinuities_quadratic`,
  `discontinuities_linear`), the piecewise age curve, exact peak and
  time-average values, and the decomposition of the average into a
  schedule-independent baseline plus distance-driven terms.

Ages are normalized so a freshly promoted seed has age 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import DistanceMatrix, Graph

__all__ = [
    "AoiTrace",
    "DecomposedAverage",
    "Discontinuity",
    "Horizon",
    "PiecewiseAoi",
    "SeedSchedule",
    "age_formula",
    "average_aoi",
    "average_aoi_decomposed",
    "baseline_average",
    "baseline_average_rearranged",
    "discontinuities_linear",
    "discontinuities_quadratic",
    "omega_set",
    "oracle_average",
    "oracle_peak",
    "peak_aoi",
    "piecewise_trace",
    "simulate_oracle",
    "simulate_round_delays",
]


@dataclass(frozen=True)
class SeedSchedule:
    """Seeding plan: round ``j`` promotes ``rounds[j-1]`` at time 1+(j-1)*delta."""

    delta: int
    rounds: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be a positive integer")
        if not self.rounds:
            raise ValueError("schedule needs at least one round")
        if any(len(r) == 0 for r in self.rounds):
            raise ValueError("every round must seed at least one node")

    @classmethod
    def single(cls, seeds: Sequence[int], delta: int) -> "SeedSchedule":
        """One seed per round, in the given order."""
        return cls(delta=delta, rounds=tuple((int(s),) for s in seeds))

    @property
    def k(self) -> int:
        return len(self.rounds)

    def timestamp(self, j: int) -> int:
        """Promotion time of 1-based round ``j``."""
        return 1 + (j - 1) * self.delta

    @property
    def timestamps(self) -> tuple[int, ...]:
        return tuple(self.timestamp(j) for j in range(1, self.k + 1))

    @property
    def all_seeds(self) -> tuple[int, ...]:
        return tuple(s for r in self.rounds for s in r)


@dataclass(frozen=True)
class Horizon:
    """Evaluation window ``[0, end]`` with initial age ``a0`` (scalar or per node)."""

    end: int
    a0: float | tuple[float, ...] = 1.0

    def __post_init__(self):
        if self.end < 1:
            raise ValueError("horizon end must be a positive integer")
        values = self.a0 if isinstance(self.a0, tuple) else (self.a0,)
        if any(a < 1 for a in values):
            raise ValueError("initial ages must be at least 1")

    def a0_array(self, n: int) -> np.ndarray:
        if isinstance(self.a0, tuple):
            if len(self.a0) != n:
                raise ValueError(f"a0 vector has length {len(self.a0)}, graph has {n} nodes")
            return np.asarray(self.a0, dtype=float)
        return np.full(n, float(self.a0))

    def scalar_a0(self) -> float:
        if isinstance(self.a0, tuple):
            raise ValueError("this computation requires a scalar initial age")
        return float(self.a0)


@dataclass(frozen=True)
class Discontinuity:
    """One age drop: at ``drop_time`` the age falls to ``post_drop_age``."""

    round_index: int
    drop_time: int
    post_drop_age: int


@dataclass(frozen=True)
class AoiTrace:
    """All age drops of one node, in round order, independent of any horizon."""

    node: int
    drops: tuple[Discontinuity, ...]

    @property
    def count(self) -> int:
        return len(self.drops)

    def clipped(self, t_end: int) -> tuple[Discontinuity, ...]:
        return tuple(d for d in self.drops if d.drop_time <= t_end)


def _check_fits(sched: SeedSchedule, horizon: Horizon) -> None:
    if sched.timestamp(sched.k) > horizon.end:
        raise ValueError(
            f"last promotion at t={sched.timestamp(sched.k)} exceeds horizon {horizon.end}"
        )


def _round_dist(sched: SeedSchedule, dm: DistanceMatrix, j: int, v: int) -> int:
    """Travel time from round ``j`` (1-based) to node ``v``: nearest seed wins."""
    return min(int(dm.dist[s, v]) for s in sched.rounds[j - 1])


def _arrivals(sched: SeedSchedule, dm: DistanceMatrix, v: int) -> list[int]:
    return [sched.timestamp(j) + _round_dist(sched, dm, j, v) for j in range(1, sched.k + 1)]


# ---------------------------------------------------------------------------
# oracle simulation
# ---------------------------------------------------------------------------

def simulate_oracle(g: Graph, sched: SeedSchedule, horizon: Horizon) -> np.ndarray:
    """Message-passing simulation of the age process.

    Each node carries the birth time of the freshest *promoted* information
    it has heard of; every slot each edge forwards what its endpoints held
    ``delay`` slots ago, then the slot's promotions reset their seeds'
    birth to ``t - 1``. A node that has heard nothing yet still holds its
    private starting information of age ``a0(v) + t``; that information
    never travels. Returns the age of every node at every integer time as
    an ``(n, end+1)`` array.

    This function is deliberately independent of the closed-form results
    in this module: it never looks at distances or drop times.
    """
    _check_fits(sched, horizon)
    n = g.node_count
    t_end = horizon.end
    births = np.empty((t_end + 1, n), dtype=float)
    births[0] = -np.inf
    seeds_at = {sched.timestamp(j): sched.rounds[j - 1] for j in range(1, sched.k + 1)}
    for t in range(1, t_end + 1):
        row = births[t - 1].copy()
        for u, v, d in g.edges:
            if t - d >= 0:
                old = births[t - d]
                if old[u] > row[v]:
                    row[v] = old[u]
                if old[v] > row[u]:
                    row[u] = old[v]
        for s in seeds_at.get(t, ()):
            if t - 1 > row[s]:
                row[s] = t - 1
        births[t] = row
    times = np.arange(t_end + 1, dtype=float)[:, None]
    ages = np.minimum(times - births, times + horizon.a0_array(n))
    return ages.T


def simulate_round_delays(
    g: Graph,
    sched: SeedSchedule,
    horizon: Horizon,
    delays_by_round: Sequence[np.ndarray],
) -> np.ndarray:
    """Ages when each round's information travels under its own edge delays.

    ``delays_by_round[j]`` aligns with ``g.edges`` and gives the delays in
    force for round ``j+1``'s information. Arrival times come from one
    multi-source shortest-path run per round; a node's age at ``t`` is
    ``t`` minus the freshest birth among rounds that have reached it.
    """
    _check_fits(sched, horizon)
    if len(delays_by_round) != sched.k:
        raise ValueError("need one delay vector per round")
    n = g.node_count
    t_end = horizon.end
    arrivals = np.empty((sched.k, n), dtype=np.int64)
    for j in range(sched.k):
        delays = np.asarray(delays_by_round[j])
        if delays.shape != (len(g.edges),) or (delays < 1).any():
            raise ValueError("each round needs one positive delay per edge")
        dist = np.full(n, -1, dtype=np.int64)
        heap: list[tuple[int, int]] = []
        for s in sched.rounds[j]:
            dist[s] = 0
            heap.append((0, s))
        heapq.heapify(heap)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v, _), d in zip(g.edges, delays):
            adj[u].append((v, int(d)))
            adj[v].append((u, int(d)))
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u] >= 0:
                continue
            for v, d in adj[u]:
                alt = du + d
                if dist[v] < 0 or alt < dist[v]:
                    dist[v] = alt
                    heapq.heappush(heap, (alt, v))
        arrivals[j] = sched.timestamp(j + 1) + dist
    births0 = -horizon.a0_array(n)
    ages = np.empty((n, t_end + 1), dtype=float)
    round_births = np.array(sched.timestamps, dtype=float) - 1.0
    for t in range(t_end + 1):
        reached = arrivals <= t
        best = np.where(reached, round_births[:, None], -np.inf).max(axis=0)
        ages[:, t] = t - np.maximum(births0, best)
    return ages


def oracle_peak(series: np.ndarray) -> tuple[float, np.ndarray]:
    """Peak age over the continuous window, from integer-time samples.

    Between consecutive integers the age rises at unit rate and any drop
    happens exactly at the right endpoint, so the supremum on ``(t-1, t]``
    is ``age(t-1) + 1`` and the network peak needs only the samples.
    """
    per_node = np.maximum(series[:, :-1].max(axis=1) + 1.0, series[:, -1])
    return float(per_node.max()), per_node


def oracle_average(series: np.ndarray) -> tuple[float, np.ndarray]:
    """Exact time-average age from integer samples (unit-slope rise per slot)."""
    t_end = series.shape[1] - 1
    per_node = (series[:, :-1].sum(axis=1) + t_end / 2.0) / t_end
    return float(per_node.mean()), per_node


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def age_formula(v: int, t: int, sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> float:
    """Age of ``v`` at integer ``t``: initial growth vs. freshest arrived round."""
    if not 0 <= t <= horizon.end:
        raise ValueError("t outside the horizon")
    a0 = float(horizon.a0_array(dm.n)[v])
    best = a0 + t
    for j in range(1, sched.k + 1):
        t_j = sched.timestamp(j)
        if t_j + _round_dist(sched, dm, j, v) <= t:
            best = min(best, 1 + t - t_j)
    return best


def omega_set(v: int, t: int, sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> tuple[int, ...]:
    """Rounds whose information lands on ``v`` exactly at ``t`` and beats its age.

    A round ``j`` qualifies when its promotion is no later than ``t``, its
    travel time equals ``t - t_j``, and the refreshed age ``1 + t - t_j``
    does not exceed the node's age at ``t - 1``. The node's age curve has
    a discontinuity at ``t`` exactly when this set is non-empty.
    """
    if not 1 <= t <= horizon.end:
        raise ValueError("t must lie in [1, end]")
    prev_age = age_formula(v, t - 1, sched, dm, horizon)
    hits = []
    for j in range(1, sched.k + 1):
        t_j = sched.timestamp(j)
        if t_j <= t and t - t_j == _round_dist(sched, dm, j, v) and 1 + t - t_j <= prev_age:
            hits.append(j)
    return tuple(hits)


def discontinuities_quadratic(v: int, sched: SeedSchedule, dm: DistanceMatrix) -> AoiTrace:
    """Drop times of ``v`` by pairwise domination filtering.

    Every round lands at ``t_j + dist``; a round is discarded as soon as
    any later round arrives no later than it does. Quadratic in the number
    of rounds, kept as the reference for the stack variant.
    """
    arrivals = _arrivals(sched, dm, v)
    k = sched.k
    removed = [False] * k
    for p in range(k):
        for q in range(p + 1, k):
            if arrivals[q] <= arrivals[p]:
                removed[p] = True
                break
    drops = tuple(
        Discontinuity(
            round_index=j + 1,
            drop_time=arrivals[j],
            post_drop_age=1 + arrivals[j] - sched.timestamp(j + 1),
        )
        for j in range(k)
        if not removed[j]
    )
    return AoiTrace(node=v, drops=drops)


def discontinuities_linear(
    v: int, sched: SeedSchedule, dm: DistanceMatrix, *, count_ops: bool = False
) -> AoiTrace | tuple[AoiTrace, int]:
    """Drop times of ``v`` via one stack pass over the arrival times.

    Arrival times are pushed in round order; popping from the top, the
    latest round always survives and an earlier round survives exactly
    when it arrives strictly before every survivor seen so far. One pop,
    at most one comparison and at most one keep per round: at most ``3k``
    operations, reported when ``count_ops`` is set.
    """
    stack = _arrivals(sched, dm, v)  # index i holds round i+1
    ops = 0
    kept: list[int] = []
    tau_up: int | None = None
    idx = len(stack)
    while idx > 0:
        idx -= 1
        tau_down = stack[idx]
        ops += 1  # pop
        if tau_up is None:
            kept.append(idx)
            tau_up = tau_down
            ops += 1  # keep
            continue
        ops += 1  # compare
        if tau_down < tau_up:
            kept.append(idx)
            tau_up = tau_down
            ops += 1  # keep
    drops = tuple(
        Discontinuity(
            round_index=i + 1,
            drop_time=stack[i],
            post_drop_age=1 + stack[i] - sched.timestamp(i + 1),
        )
        for i in reversed(kept)
    )
    trace = AoiTrace(node=v, drops=drops)
    return (trace, ops) if count_ops else trace


@dataclass(frozen=True)
class PiecewiseAoi:
    """Closed-form age curve of one node on ``[0, end]``."""

    node: int
    trace: AoiTrace
    a0: float
    end: int

    def value(self, t: float) -> float:
        """Age at any real ``t`` in the window (right-continuous at drops)."""
        if not 0 <= t <= self.end:
            raise ValueError("t outside the horizon")
        current = None
        for d in self.trace.drops:
            if d.drop_time <= t:
                current = d
            else:
                break
        if current is None:
            return self.a0 + t
        return current.post_drop_age + (t - current.drop_time)

    def pieces(self) -> tuple[tuple[float, float], ...]:
        """(start age, length) of each linear piece covering ``[0, end]``."""
        drops = self.trace.clipped(self.end)
        if not drops:
            return ((self.a0, float(self.end)),)
        out = [(self.a0, float(drops[0].drop_time))]
        for here, nxt in zip(drops, drops[1:]):
            out.append((float(here.post_drop_age), float(nxt.drop_time - here.drop_time)))
        last = drops[-1]
        out.append((float(last.post_drop_age), float(self.end - last.drop_time)))
        return tuple(out)


def piecewise_trace(v: int, sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> PiecewiseAoi:
    """Piecewise-linear age curve of ``v`` under the schedule."""
    _check_fits(sched, horizon)
    trace = discontinuities_linear(v, sched, dm)
    a0 = float(horizon.a0_array(dm.n)[v])
    return PiecewiseAoi(node=v, trace=trace, a0=a0, end=horizon.end)


def peak_aoi(sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> tuple[float, np.ndarray]:
    """Exact peak age over ``[0, end]``, network-wide and per node.

    Each linear piece tops out at its right end (the left limit at the
    next drop, or the closing value at the horizon), so the peak is the
    maximum of ``start + length`` over the pieces of every node.
    """
    _check_fits(sched, horizon)
    a0 = horizon.a0_array(dm.n)
    per_node = np.empty(dm.n)
    for v in range(dm.n):
        trace = discontinuities_linear(v, sched, dm)
        drops = trace.clipped(horizon.end)
        if not drops:
            per_node[v] = a0[v] + horizon.end
            continue
        best = a0[v] + drops[0].drop_time
        for here, nxt in zip(drops, drops[1:]):
            best = max(best, here.post_drop_age + nxt.drop_time - here.drop_time)
        best = max(best, drops[-1].post_drop_age + horizon.end - drops[-1].drop_time)
        per_node[v] = best
    return float(per_node.max()), per_node


def average_aoi(sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> tuple[float, np.ndarray]:
    """Exact time-average age over ``[0, end]``, network-wide and per node.

    Integrates the trapezoid under each unit-slope piece:
    ``(2 * start + length) * length / 2``.
    """
    _check_fits(sched, horizon)
    a0 = horizon.a0_array(dm.n)
    t_end = horizon.end
    per_node = np.empty(dm.n)
    for v in range(dm.n):
        curve = PiecewiseAoi(
            node=v, trace=discontinuities_linear(v, sched, dm), a0=float(a0[v]), end=t_end
        )
        area = sum((2 * start + length) * length / 2 for start, length in curve.pieces())
        per_node[v] = area / t_end
    return float(per_node.mean()), per_node


# ---------------------------------------------------------------------------
# average decomposition
# ---------------------------------------------------------------------------

def baseline_average(a0: float, delta: int, t_end: int, k: int) -> float:
    """Schedule-independent part of the network average age.

    Depends only on the initial age, the promotion interval, the horizon
    and the number of rounds; the remaining terms of the decomposition
    carry all distance information.
    """
    return (
        2 * a0
        - 2 * delta * a0
        + t_end**2
        + 2 * delta * t_end
        + delta**2
        - 2 * delta
        + 2 * (delta - t_end * delta - delta**2) * k
        + delta**2 * k**2
    ) / (2 * t_end)


def baseline_average_rearranged(a0: float, delta: int, t_end: int, k: int) -> float:
    """Algebraically rearranged form of :func:`baseline_average` (cross-check)."""
    head = (
        2 * a0
        - 2 * a0 * delta
        + delta**2
        - 2 * delta
        + 2 * k * delta
        - 2 * k * delta**2
        + k**2 * delta**2
    ) / (2 * t_end)
    return head + t_end / 2 + (1 - k) * delta


@dataclass(frozen=True)
class DecomposedAverage:
    """Network average age split into a baseline plus three seeding terms.

    ``baseline`` ignores the schedule entirely; ``initial_reach`` charges
    the wait for each node's first surviving update; ``gap_distance`` and
    ``gap_square`` charge the distances and squared round gaps of the
    surviving updates. All terms are already averaged over nodes and
    normalized by twice the horizon, so they sum to the exact average.
    """

    baseline: float
    initial_reach: float
    gap_distance: float
    gap_square: float

    @property
    def total(self) -> float:
        return self.baseline + self.initial_reach + self.gap_distance + self.gap_square


def average_aoi_decomposed(sched: SeedSchedule, dm: DistanceMatrix, horizon: Horizon) -> DecomposedAverage:
    """Exact decomposition of the average age (scalar initial age only).

    For each node with surviving update rounds ``i_1 < ... < i_m`` (and
    the convention ``i_0 = 1``), the deviation from the baseline is::

        2*a0*(delta*i_1 + d_1) + 2*delta * sum_j (i_j - i_{j-1}) * d_j
                                +   delta**2 * sum_j (i_j - i_{j-1})**2

    halved by ``2 * end`` and averaged over nodes, where ``d_j`` is the
    travel time of round ``i_j`` to the node. The identity with
    :func:`average_aoi` is exact whenever the final round reaches every
    node within the horizon.
    """
    _check_fits(sched, horizon)
    a0 = horizon.scalar_a0()
    delta = sched.delta
    n = dm.n
    t_initial = 0
    t_gap_dist = 0
    t_gap_sq = 0
    for v in range(n):
        trace = discontinuities_linear(v, sched, dm)
        rounds = [d.round_index for d in trace.drops]
        dists = [d.post_drop_age - 1 for d in trace.drops]
        t_initial += 2 * a0 * (delta * rounds[0] + dists[0])
        prev = 1
        for idx, d in zip(rounds, dists):
            gap = idx - prev
            t_gap_dist += 2 * delta * gap * d
            t_gap_sq += delta**2 * gap**2
            prev = idx
    scale = 1.0 / (n * 2 * horizon.end)
    return DecomposedAverage(
        baseline=baseline_average(a0, delta, horizon.end, sched.k),
        initial_reach=t_initial * scale,
        gap_distance=t_gap_dist * scale,
        gap_square=t_gap_sq * scale,
    )
