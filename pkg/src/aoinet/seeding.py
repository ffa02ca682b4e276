"""Seed-selection strategies for multi-round information promotion.

Four planners with one contract: given a graph and a round budget, return
a `SeedSchedule`.

* `cyclic_seeding` places a small set of candidate nodes along a diameter
  path, spaced so that early candidates sit near the far end and later
  ones fall back toward the start, then promotes them round-robin. The
  candidate count and the spacing slack come from `optimal_mu_sigma`.
* `k_minisum` seeds the nodes with the smallest total travel time to the
  rest of the network, best first.
* `greedy_max_age` simulates the process and always promotes the node
  whose age is largest at promotion time (the natural baseline).
* `brute_force_optimal` enumerates every seed sequence up to a cap.
"""

from __future__ import annotations

import itertools
import logging
from bisect import bisect_left
from dataclasses import dataclass
from math import isqrt

from .aoi import Horizon, SeedSchedule, average_aoi, peak_aoi
from .graphs import DiameterPath, DistanceMatrix, Graph, all_pairs_distances, diameter_path, sum_distance_vector

__all__ = [
    "CyclicPlan",
    "brute_force_optimal",
    "candidate_positions",
    "closed_form_mu_sigma",
    "cyclic_plan",
    "cyclic_seeding",
    "greedy_max_age",
    "k_minisum",
    "optimal_mu_sigma",
]

logger = logging.getLogger(__name__)


def _coverage_ok(mu: int, sigma: int, delta: int, diam_len: int) -> bool:
    # candidate budget reachable within one cycle must cover the whole path
    return mu + delta * (mu - 1) * mu + 2 * sigma * mu >= diam_len + 1


def optimal_mu_sigma(diam_len: int, delta: int) -> tuple[int, int]:
    """Smallest-first-cycle candidate count and slack for a given path length.

    Exhaustively searches candidate counts ``mu in [1, diam_len + 1]`` and
    slacks ``sigma in [0, delta - 1]`` for the pair minimizing the first
    full-coverage time ``1 + (mu - 1) * delta + sigma`` subject to the
    coverage inequality. The closed-form shortcut is computed alongside
    and compared; the search result is always the one returned.
    """
    if diam_len < 0:
        raise ValueError("diameter length cannot be negative")
    if delta < 1:
        raise ValueError("delta must be a positive integer")
    best: tuple[int, int, int] | None = None  # (t1, mu, sigma)
    for mu in range(1, diam_len + 2):
        for sigma in range(delta):
            if _coverage_ok(mu, sigma, delta, diam_len):
                t1 = 1 + (mu - 1) * delta + sigma
                if best is None or t1 < best[0]:
                    best = (t1, mu, sigma)
    assert best is not None  # mu = diam_len + 1, sigma = 0 always covers
    _, mu, sigma = best
    guess = closed_form_mu_sigma(diam_len, delta)
    if guess == (mu, sigma) and _coverage_ok(*guess, delta, diam_len) and 0 <= guess[1] < delta:
        logger.info("closed-form (mu, sigma) agrees with search: %s", guess)
    else:
        logger.info(
            "closed-form (mu, sigma)=%s rejected for diam=%d delta=%d; search gives %s",
            guess, diam_len, delta, (mu, sigma),
        )
    return mu, sigma


def closed_form_mu_sigma(diam_len: int, delta: int) -> tuple[int, int]:
    """Floor/ceil shortcut for `optimal_mu_sigma`; can be infeasible.

    Known gaps: the candidate count can be too small to satisfy coverage
    (for example path length 10 with delta 2) and the slack can land
    outside ``[0, delta)``. Callers must validate before trusting it.
    """
    # mu = floor((delta - 1 + sqrt(delta^2 + 2*delta + 4*diam*delta + 1)) / (2*delta)),
    # evaluated in exact integer arithmetic.
    radicand = delta * delta + 2 * delta + 4 * diam_len * delta + 1
    mu = (delta - 1 + isqrt(radicand)) // (2 * delta)
    while True:
        edge = 2 * delta * (mu + 1) - delta + 1
        if edge <= 0 or edge * edge <= radicand:
            mu += 1
        else:
            break
    while mu >= 1:
        edge = 2 * delta * mu - delta + 1
        if edge <= 0 or edge * edge <= radicand:
            break
        mu -= 1
    mu = max(mu, 1)
    numerator = diam_len + 1 - (mu * mu * delta - mu * delta + mu)
    sigma = -(-numerator // (2 * mu))
    return mu, max(sigma, 0)


def candidate_positions(mu: int, sigma: int, delta: int, diam_len: int) -> tuple[int, ...]:
    """1-based path positions of the cyclic candidates, first candidate farthest.

    Raw position of candidate ``x`` (1-based)::

        delta*(mu - x + 1)**2 + (mu - x + 1) + (2*mu - 2*x + 1)*sigma

    Positions beyond the far end clamp onto it; when two clamp to the same
    node the later one steps down one node so the sequence stays strictly
    decreasing and the candidates stay distinct.
    """
    if mu > diam_len + 1:
        raise ValueError("more candidates than path nodes")
    out: list[int] = []
    bound = diam_len + 1
    for x in range(1, mu + 1):
        back = mu - x + 1
        raw = delta * back * back + back + (2 * mu - 2 * x + 1) * sigma
        pos = min(raw, bound)
        if pos < 1:
            raise ValueError("candidate position fell off the near end")
        out.append(pos)
        bound = pos - 1
    return tuple(out)


@dataclass(frozen=True)
class CyclicPlan:
    """Resolved cyclic-seeding layout for one graph."""

    mu: int
    sigma: int
    t1: int
    positions: tuple[int, ...]
    candidates: tuple[int, ...]


def cyclic_plan(g: Graph, delta: int, dm: DistanceMatrix | None = None,
                dp: DiameterPath | None = None) -> CyclicPlan:
    """Candidate layout of `cyclic_seeding` on ``g``.

    Positions index travel time along the diameter path: position ``p``
    resolves to the first path node at cumulative travel time ``>= p - 1``
    (on unit-delay graphs, simply the p-th path node).
    """
    if dm is None:
        dm = all_pairs_distances(g)
    if dp is None:
        dp = diameter_path(g, dm)
    mu, sigma = optimal_mu_sigma(dp.length, delta)
    positions = candidate_positions(mu, sigma, delta, dp.length)
    cumulative = [0]
    for a, b in zip(dp.nodes, dp.nodes[1:]):
        cumulative.append(cumulative[-1] + g.delay(a, b))
    candidates = tuple(dp.nodes[bisect_left(cumulative, p - 1)] for p in positions)
    return CyclicPlan(
        mu=mu, sigma=sigma, t1=1 + (mu - 1) * delta + sigma,
        positions=positions, candidates=candidates,
    )


def cyclic_seeding(g: Graph, k: int, delta: int, *, seeds_per_round: int = 1,
                   dm: DistanceMatrix | None = None,
                   dp: DiameterPath | None = None) -> SeedSchedule:
    """Round-robin promotion of the cyclic candidates for ``k`` rounds.

    With ``seeds_per_round > 1`` each round takes the next block of
    candidates from the same round-robin stream (duplicates within a
    round collapse).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if seeds_per_round < 1:
        raise ValueError("seeds_per_round must be a positive integer")
    plan = cyclic_plan(g, delta, dm, dp)
    rounds = []
    cursor = 0
    for _ in range(k):
        picks = []
        for _ in range(seeds_per_round):
            picks.append(plan.candidates[cursor % plan.mu])
            cursor += 1
        rounds.append(tuple(dict.fromkeys(picks)))
    return SeedSchedule(delta=delta, rounds=tuple(rounds))


def k_minisum(g: Graph, dm: DistanceMatrix, k: int, delta: int, *,
              seeds_per_round: int = 1) -> SeedSchedule:
    """Seed the smallest-total-travel-time nodes, best first.

    Exactly solves the distance-mass placement problem the schedule is
    scored against: the objective is separable, so the optimal set of
    ``k`` nodes is the ``k`` smallest row sums, and promoting them in
    increasing order matches the scoring order.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if seeds_per_round < 1:
        raise ValueError("seeds_per_round must be a positive integer")
    need = k * seeds_per_round
    if need > g.node_count:
        raise ValueError(f"need {need} distinct seeds but graph has {g.node_count} nodes")
    sums = sum_distance_vector(dm)
    order = sorted(range(g.node_count), key=lambda v: (int(sums[v]), v))
    rounds = tuple(tuple(order[i * seeds_per_round:(i + 1) * seeds_per_round]) for i in range(k))
    return SeedSchedule(delta=delta, rounds=rounds)


def greedy_max_age(g: Graph, k: int, delta: int, horizon: Horizon, *,
                   seeds_per_round: int = 1) -> SeedSchedule:
    """Promote whichever nodes are oldest at each promotion time.

    Ages are read after the slot's propagation but before the slot's
    promotion, ties go to the smallest node id. One forward simulation
    pass; no closed forms involved.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if seeds_per_round < 1:
        raise ValueError("seeds_per_round must be a positive integer")
    t_last = 1 + (k - 1) * delta
    if t_last > horizon.end:
        raise ValueError(f"last promotion at t={t_last} exceeds horizon {horizon.end}")
    n = g.node_count
    births = [list(-horizon.a0_array(n))]
    seed_times = {1 + (j - 1) * delta: j for j in range(1, k + 1)}
    rounds: list[tuple[int, ...]] = []
    for t in range(1, t_last + 1):
        row = list(births[t - 1])
        for u, v, d in g.edges:
            if t - d >= 0:
                old = births[t - d]
                if old[u] > row[v]:
                    row[v] = old[u]
                if old[v] > row[u]:
                    row[u] = old[v]
        if t in seed_times:
            ages = [t - b for b in row]
            picks = sorted(range(n), key=lambda v: (-ages[v], v))[:seeds_per_round]
            for s in picks:
                row[s] = max(row[s], t - 1)
            rounds.append(tuple(sorted(picks)))
        births.append(row)
    return SeedSchedule(delta=delta, rounds=tuple(rounds))


def brute_force_optimal(dm: DistanceMatrix, k: int, delta: int, horizon: Horizon,
                        objective: str, *, cap: int = 2_000_000) -> tuple[SeedSchedule, float]:
    """Best single-seed-per-round schedule by full enumeration.

    Scans all ``n**k`` seed sequences in lexicographic order (so ties keep
    the smallest sequence) and scores each with the exact closed forms.
    Refuses to run past ``cap`` sequences.
    """
    if objective not in ("peak", "avg"):
        raise ValueError("objective must be 'peak' or 'avg'")
    n = dm.n
    total = n**k
    if total > cap:
        raise ValueError(f"{total} sequences exceed the enumeration cap {cap}")
    score = peak_aoi if objective == "peak" else average_aoi
    best_sched: SeedSchedule | None = None
    best_value = float("inf")
    for combo in itertools.product(range(n), repeat=k):
        sched = SeedSchedule.single(combo, delta)
        value = score(sched, dm, horizon)[0]
        if value < best_value:
            best_value = value
            best_sched = sched
    assert best_sched is not None
    return best_sched, best_value
