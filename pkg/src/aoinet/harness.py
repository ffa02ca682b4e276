"""Experiment harness: sweep a planner over round budgets and report CSV rows.

A run is described by `ExperimentConfig`, executed by `run_experiment`,
and serialized by `emit_csv`. Each sweep point yields one `ExperimentRow`
carrying the achieved peak and average ages, the benchmark values from
the bounds module, their ratios, and bookkeeping columns.

Determinism contract: for a fixed config (including ``rng_seed``) the
emitted CSV is byte-identical across runs. Wall-clock timing is therefore
opt-in (``timing=True``); without it the runtime column is written as
zero.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from . import bounds as bounds_mod
from .aoi import (
    Horizon,
    SeedSchedule,
    average_aoi,
    oracle_average,
    oracle_peak,
    peak_aoi,
    simulate_round_delays,
)
from .graphs import Graph, all_pairs_distances, diameter_path, from_edges, load_edge_list
from .seeding import brute_force_optimal, cyclic_seeding, greedy_max_age, k_minisum

__all__ = [
    "ALGORITHMS",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentRow",
    "CSV_COLUMNS",
    "emit_csv",
    "run_experiment",
]

ALGORITHMS = ("cyclic", "kminisum", "greedy", "optimal")
OBJECTIVES = ("peak", "avg", "both")
DELAY_MODES = ("unit", "static_weighted", "resampled_per_round")
RESAMPLED_DELAY_CHOICES = (1, 2, 3)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment sweep.

    ``horizon`` is either an explicit end time shared by all sweep points
    or ``"auto"``, which gives each point ``1 + (k-1)*delta + reach + 5``
    slots so the final round's information settles everywhere (``reach``
    is the graph diameter, tripled in resampled-delay mode where a delay
    can be 3).
    """

    graph_path: str | None = None
    algorithm: str = "cyclic"
    objective: str = "both"
    k_values: tuple[int, ...] = (1,)
    delta: int = 1
    a0: float = 1.0
    a0_random: bool = False
    horizon: int | str = "auto"
    seeds_per_round: int = 1
    delay_mode: str = "unit"
    trials: int = 10
    rng_seed: int = 0
    drop_isolated: bool = False
    timing: bool = False

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.algorithm == "optimal" and self.objective == "both":
            raise ConfigError("exhaustive search needs a single objective, not 'both'")
        if not self.k_values:
            raise ConfigError("k_values must not be empty")
        if any(k < 1 for k in self.k_values):
            raise ConfigError("every k must be a positive integer")
        if self.delta < 1:
            raise ConfigError("delta must be a positive integer")
        if self.a0 < 1:
            raise ConfigError("a0 must be at least 1")
        if self.seeds_per_round < 1:
            raise ConfigError("seeds_per_round must be a positive integer")
        if self.delay_mode not in DELAY_MODES:
            raise ConfigError(f"delay_mode must be one of {DELAY_MODES}, got {self.delay_mode!r}")
        if self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        if isinstance(self.horizon, str):
            if self.horizon != "auto":
                raise ConfigError("horizon must be a positive integer or 'auto'")
        elif self.horizon < 1:
            raise ConfigError("horizon must be a positive integer or 'auto'")
        if self.algorithm == "optimal" and self.seeds_per_round != 1:
            raise ConfigError("exhaustive search supports one seed per round only")

    @property
    def randomized(self) -> bool:
        return self.a0_random or self.delay_mode == "resampled_per_round"


@dataclass(frozen=True)
class ExperimentRow:
    """One sweep point. Ratios compare achieved values to the benchmarks."""

    algorithm: str
    k: int
    delta: int
    seeds_per_round: int
    peak: float
    avg: float
    lb_peak: float
    lb_avg: float
    peak_ratio: float
    avg_ratio: float
    runtime_ms: float
    rng_seed: int
    peak_std: float = 0.0
    avg_std: float = 0.0


CSV_COLUMNS = (
    "algorithm", "k", "delta", "seeds_per_round", "peak", "avg",
    "lb_peak", "lb_avg", "peak_ratio", "avg_ratio", "runtime_ms",
    "rng_seed", "peak_std", "avg_std",
)


def _unit_copy(g: Graph) -> Graph:
    if g.unit_delays:
        return g
    return from_edges(((u, v, 1) for u, v, _ in g.edges), node_count=g.node_count)


def _auto_horizon(cfg: ExperimentConfig, k: int, diam: int) -> int:
    reach = 3 * diam if cfg.delay_mode == "resampled_per_round" else diam
    return 1 + (k - 1) * cfg.delta + reach + 5


def _draw_a0(rng: np.random.Generator, nominal: float, n: int) -> tuple[float, ...]:
    # uniform on [1, 2*a0 - 1], so the mean equals the nominal value
    if float(nominal).is_integer():
        hi = int(2 * nominal - 1)
        return tuple(float(x) for x in rng.integers(1, hi + 1, size=n))
    return tuple(float(x) for x in rng.uniform(1.0, 2.0 * nominal - 1.0, size=n))


def _plan(cfg: ExperimentConfig, k: int, g_plan: Graph, dm, dp, horizon: Horizon) -> SeedSchedule:
    # planners work from the unit-delay view in resampled mode: they do not
    # see the drawn delays, mirroring incomplete knowledge of the medium
    if cfg.algorithm == "cyclic":
        return cyclic_seeding(g_plan, k, cfg.delta, seeds_per_round=cfg.seeds_per_round,
                              dm=dm, dp=dp)
    if cfg.algorithm == "kminisum":
        return k_minisum(g_plan, dm, k, cfg.delta, seeds_per_round=cfg.seeds_per_round)
    if cfg.algorithm == "greedy":
        return greedy_max_age(g_plan, k, cfg.delta, horizon,
                              seeds_per_round=cfg.seeds_per_round)
    sched, _ = brute_force_optimal(dm, k, cfg.delta, horizon,
                                   "peak" if cfg.objective == "peak" else "avg")
    return sched


def _evaluate(cfg: ExperimentConfig, k: int, g_eval: Graph, dm, sched: SeedSchedule,
              t_end: int) -> tuple[float, float, float, float]:
    """(peak, avg, peak_std, avg_std) for one sweep point."""
    if not cfg.randomized:
        h = Horizon(end=t_end, a0=cfg.a0)
        return peak_aoi(sched, dm, h)[0], average_aoi(sched, dm, h)[0], 0.0, 0.0
    rng = np.random.default_rng([cfg.rng_seed, k])
    peaks, avgs = [], []
    for _ in range(cfg.trials):
        a0 = _draw_a0(rng, cfg.a0, g_eval.node_count) if cfg.a0_random else cfg.a0
        h = Horizon(end=t_end, a0=a0)
        if cfg.delay_mode == "resampled_per_round":
            delays = [rng.integers(RESAMPLED_DELAY_CHOICES[0], RESAMPLED_DELAY_CHOICES[-1] + 1,
                                   size=len(g_eval.edges)) for _ in range(sched.k)]
            series = simulate_round_delays(g_eval, sched, h, delays)
            peaks.append(oracle_peak(series)[0])
            avgs.append(oracle_average(series)[0])
        else:
            peaks.append(peak_aoi(sched, dm, h)[0])
            avgs.append(average_aoi(sched, dm, h)[0])
    def std(xs: list[float]) -> float:
        return float(np.std(xs, ddof=1)) if len(xs) > 1 else 0.0
    return float(np.mean(peaks)), float(np.mean(avgs)), std(peaks), std(avgs)


def _benchmarks(cfg: ExperimentConfig, k: int, dm, t_end: int) -> tuple[float, float]:
    if dm.n == 1:
        # single node: the only schedule seeds it every round; benchmarks
        # collapse to that schedule's exact values
        h = Horizon(end=t_end, a0=cfg.a0)
        only = SeedSchedule.single([0] * k, cfg.delta)
        return peak_aoi(only, dm, h)[0], average_aoi(only, dm, h)[0]
    if k > dm.n:
        raise ConfigError("average benchmark needs k <= node count")
    return (
        bounds_mod.lb_peak(dm, cfg.a0),
        bounds_mod.lb_avg(dm, cfg.a0, cfg.delta, t_end, k),
    )


def run_experiment(cfg: ExperimentConfig, graph: Graph | None = None) -> list[ExperimentRow]:
    """Execute the sweep and return one row per k, ordered by k.

    ``graph`` short-circuits file loading (useful for tests and library
    callers); otherwise ``cfg.graph_path`` is read. Rows honor the
    ``AOI_THREADS`` environment variable for per-sweep-point parallelism;
    results are deterministic either way because every sweep point owns
    an independent random stream keyed by ``(rng_seed, k)``.
    """
    cfg.validate()
    if graph is None:
        if cfg.graph_path is None:
            raise ConfigError("no graph given: set graph_path or pass a Graph")
        with open(cfg.graph_path, "r", encoding="utf-8") as fh:
            graph = load_edge_list(fh, drop_isolated=cfg.drop_isolated)
    if cfg.delay_mode == "unit":
        g_eval = _unit_copy(graph)
        g_plan = g_eval
    elif cfg.delay_mode == "static_weighted":
        g_eval = graph
        g_plan = graph
    else:
        g_eval = _unit_copy(graph)
        g_plan = g_eval
    dm = all_pairs_distances(g_plan)
    dp = diameter_path(g_plan, dm)
    diam = dm.max_distance()

    def build_row(k: int) -> ExperimentRow:
        started = time.perf_counter()
        t_end = cfg.horizon if isinstance(cfg.horizon, int) else _auto_horizon(cfg, k, diam)
        if 1 + (k - 1) * cfg.delta > t_end:
            raise ConfigError(
                f"horizon {t_end} cannot fit k={k} rounds spaced {cfg.delta} apart"
            )
        horizon = Horizon(end=t_end, a0=cfg.a0)
        sched = _plan(cfg, k, g_plan, dm, dp, horizon)
        peak, avg, peak_std, avg_std = _evaluate(cfg, k, g_eval, dm, sched, t_end)
        lo_peak, lo_avg = _benchmarks(cfg, k, dm, t_end)
        elapsed_ms = (time.perf_counter() - started) * 1000.0 if cfg.timing else 0.0
        return ExperimentRow(
            algorithm=cfg.algorithm,
            k=k,
            delta=cfg.delta,
            seeds_per_round=cfg.seeds_per_round,
            peak=peak,
            avg=avg,
            lb_peak=lo_peak,
            lb_avg=lo_avg,
            peak_ratio=peak / lo_peak,
            avg_ratio=avg / lo_avg,
            runtime_ms=elapsed_ms,
            rng_seed=cfg.rng_seed,
            peak_std=peak_std,
            avg_std=avg_std,
        )

    ks = sorted(set(cfg.k_values))
    workers = max(int(os.environ.get("AOI_THREADS", "1") or "1"), 1)
    if workers == 1 or len(ks) == 1:
        return [build_row(k) for k in ks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(build_row, ks))


def emit_csv(rows: Sequence[ExperimentRow], sink: IO[str]) -> None:
    """Write rows as RFC-4180 CSV with a fixed header and 6-decimal floats."""
    import csv

    writer = csv.writer(sink)
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            r.algorithm,
            r.k,
            r.delta,
            r.seeds_per_round,
            f"{r.peak:.6f}",
            f"{r.avg:.6f}",
            f"{r.lb_peak:.6f}",
            f"{r.lb_avg:.6f}",
            f"{r.peak_ratio:.6f}",
            f"{r.avg_ratio:.6f}",
            f"{r.runtime_ms:.6f}",
            r.rng_seed,
            f"{r.peak_std:.6f}",
            f"{r.avg_std:.6f}",
        ])
