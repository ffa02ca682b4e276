from __future__ import annotations

import csv
import io
import re
from importlib import resources

import numpy as np
import pytest

from aoinet import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    Horizon,
    average_aoi,
    all_pairs_distances,
    cyclic_seeding,
    emit_csv,
    k_minisum,
    lb_avg,
    lb_peak,
    load_edge_list,
    oracle_average,
    oracle_peak,
    path_graph,
    peak_aoi,
    run_experiment,
    simulate_round_delays,
    from_edges,
)
from aoinet.harness import _auto_horizon, _draw_a0
from aoinet.cli import main


def _dataset():
    text = resources.files("aoinet.data").joinpath("social_circles.txt").read_text()
    return load_edge_list(text, drop_isolated=True)


def _cfg(**overrides) -> ExperimentConfig:
    base = dict(k_values=(1,))
    base.update(overrides)
    return ExperimentConfig(**base)


def test_config_validation_messages() -> None:
    cases = [
        (dict(algorithm="magic"), "algorithm must be one of"),
        (dict(objective="speed"), "objective must be one of"),
        (dict(algorithm="optimal"), "single objective, not 'both'"),
        (dict(k_values=()), "k_values must not be empty"),
        (dict(k_values=(0, 2)), "positive integer"),
        (dict(delta=0), "delta must be a positive"),
        (dict(a0=0.5), "a0 must be at least 1"),
        (dict(seeds_per_round=0), "seeds_per_round"),
        (dict(delay_mode="warp"), "delay_mode must be one of"),
        (dict(trials=0), "trials must be a positive"),
        (dict(horizon="soon"), "horizon must be a positive integer or 'auto'"),
        (dict(horizon=0), "horizon must be a positive integer or 'auto'"),
        (dict(algorithm="optimal", objective="peak", seeds_per_round=2), "one seed per round"),
    ]
    for overrides, fragment in cases:
        with pytest.raises(ConfigError, match=re.escape(fragment)):
            _cfg(**overrides).validate()
    _cfg(algorithm="optimal", objective="avg").validate()


def test_randomized_property() -> None:
    assert not _cfg().randomized
    assert _cfg(a0_random=True).randomized
    assert _cfg(delay_mode="resampled_per_round").randomized


def test_auto_horizon_formula() -> None:
    cfg = _cfg(delta=2)
    assert _auto_horizon(cfg, 3, 8) == 1 + 2 * 2 + 8 + 5
    resampled = _cfg(delta=1, delay_mode="resampled_per_round")
    assert _auto_horizon(resampled, 1, 4) == 1 + 3 * 4 + 5


def test_draw_a0_integral_mean_and_range() -> None:
    rng = np.random.default_rng(0)
    draws = _draw_a0(rng, 3.0, 4000)
    assert set(draws) <= {1.0, 2.0, 3.0, 4.0, 5.0}
    assert abs(float(np.mean(draws)) - 3.0) < 0.1
    ones = _draw_a0(rng, 1.0, 16)
    assert set(ones) == {1.0}


def test_run_experiment_rows_match_direct_computation() -> None:
    g = path_graph(9)
    cfg = _cfg(k_values=(3, 1, 3), delta=1, a0=2.0)
    rows = run_experiment(cfg, g)
    assert [r.k for r in rows] == [1, 3]
    dm = all_pairs_distances(g)
    for row in rows:
        t_end = 1 + (row.k - 1) + dm.max_distance() + 5
        sched = cyclic_seeding(g, row.k, 1)
        h = Horizon(end=t_end, a0=2.0)
        assert row.peak == peak_aoi(sched, dm, h)[0]
        assert row.avg == average_aoi(sched, dm, h)[0]
        assert row.lb_peak == lb_peak(dm, 2.0)
        assert row.lb_avg == lb_avg(dm, 2.0, 1, t_end, row.k)
        assert row.peak_ratio == row.peak / row.lb_peak
        assert row.avg_ratio == row.avg / row.lb_avg
        assert row.runtime_ms == 0.0
        assert row.rng_seed == 0


def test_run_experiment_requires_a_graph_source() -> None:
    with pytest.raises(ConfigError, match="no graph given"):
        run_experiment(_cfg())


def test_timing_opt_in() -> None:
    g = path_graph(5)
    rows = run_experiment(_cfg(timing=True), g)
    assert rows[0].runtime_ms > 0.0


def test_horizon_too_small_for_rounds() -> None:
    g = path_graph(5)
    with pytest.raises(ConfigError, match="horizon 3 cannot fit k=5 rounds spaced 2"):
        run_experiment(_cfg(k_values=(5,), delta=2, horizon=3), g)


def test_single_node_graph_benchmarks_collapse() -> None:
    g = from_edges([], node_count=1)
    rows = run_experiment(_cfg(k_values=(1, 2), horizon=8), g)
    for row in rows:
        assert row.peak_ratio == 1.0
        assert row.avg_ratio == 1.0


def test_k_beyond_node_count_is_rejected() -> None:
    g = path_graph(3)
    # cyclic wraps its candidate list, so the benchmark check trips first
    with pytest.raises(ConfigError, match="k <= node count"):
        run_experiment(_cfg(k_values=(4,), horizon=20), g)
    # kminisum needs the seeds to be distinct and rejects on its own
    with pytest.raises(ValueError, match="distinct seeds"):
        run_experiment(_cfg(k_values=(4,), algorithm="kminisum", horizon=20), g)


def test_byte_determinism_across_runs_randomized() -> None:
    g = _dataset()
    cfg = _cfg(k_values=(1, 2, 4), a0=3.0, a0_random=True, trials=3, rng_seed=11)
    out1, out2 = io.StringIO(), io.StringIO()
    emit_csv(run_experiment(cfg, g), out1)
    emit_csv(run_experiment(cfg, g), out2)
    assert out1.getvalue() == out2.getvalue()
    assert "\r\n" in out1.getvalue()


def test_trials_and_std_columns_replicate_exactly() -> None:
    g = path_graph(5)
    dm = all_pairs_distances(g)
    cfg = _cfg(algorithm="kminisum", k_values=(2,), a0=3.0, a0_random=True,
               trials=4, rng_seed=9, horizon=12)
    row = run_experiment(cfg, g)[0]
    sched = k_minisum(g, dm, 2, 1)
    rng = np.random.default_rng([9, 2])
    peaks, avgs = [], []
    for _ in range(4):
        a0 = tuple(float(x) for x in rng.integers(1, 6, size=5))
        h = Horizon(end=12, a0=a0)
        peaks.append(peak_aoi(sched, dm, h)[0])
        avgs.append(average_aoi(sched, dm, h)[0])
    assert row.peak == float(np.mean(peaks))
    assert row.avg == float(np.mean(avgs))
    assert row.peak_std == float(np.std(peaks, ddof=1))
    assert row.avg_std == float(np.std(avgs, ddof=1))
    # the peak here is set by post-drop growth, immune to the a0 draws;
    # the average does move with them
    assert row.avg_std > 0.0
    single = run_experiment(_cfg(algorithm="kminisum", k_values=(2,), a0=3.0,
                                 a0_random=True, trials=1, rng_seed=9, horizon=12), g)[0]
    assert single.peak_std == 0.0
    assert single.avg_std == 0.0


def test_resampled_mode_plans_on_unit_view_and_replays_exactly() -> None:
    weighted = load_edge_list("0 1 3\n1 2 2\n0 2 1\n")
    cfg = _cfg(delay_mode="resampled_per_round", k_values=(2,), trials=3, rng_seed=5)
    row = run_experiment(cfg, weighted)[0]
    unit = from_edges([(u, v, 1) for u, v, _ in weighted.edges], node_count=3)
    dm = all_pairs_distances(unit)
    t_end = 1 + 1 + 3 * dm.max_distance() + 5
    sched = cyclic_seeding(unit, 2, 1, dm=dm)
    rng = np.random.default_rng([5, 2])
    peaks, avgs = [], []
    for _ in range(3):
        h = Horizon(end=t_end, a0=1.0)
        delays = [rng.integers(1, 4, size=3) for _ in range(2)]
        series = simulate_round_delays(unit, sched, h, delays)
        peaks.append(oracle_peak(series)[0])
        avgs.append(oracle_average(series)[0])
    assert row.peak == float(np.mean(peaks))
    assert row.avg == float(np.mean(avgs))


def test_thread_env_does_not_change_rows(monkeypatch) -> None:
    g = _dataset()
    cfg = _cfg(k_values=(1, 2, 3, 4), a0=2.0)
    monkeypatch.delenv("AOI_THREADS", raising=False)
    serial = run_experiment(cfg, g)
    monkeypatch.setenv("AOI_THREADS", "3")
    threaded = run_experiment(cfg, g)
    assert serial == threaded


GOLDEN_DEFAULT_SWEEP = (
    "algorithm,k,delta,seeds_per_round,peak,avg,lb_peak,lb_avg,peak_ratio,avg_ratio,"
    "runtime_ms,rng_seed,peak_std,avg_std\r\n"
    "cyclic,1,1,1,19.000000,10.041176,6.885994,9.566159,2.759224,1.049656,0.000000,0,0.000000,0.000000\r\n"
    "cyclic,2,1,1,19.000000,9.932941,6.885994,9.163563,2.759224,1.083961,0.000000,0,0.000000,0.000000\r\n"
    "cyclic,3,1,1,19.000000,9.358263,6.885994,8.807549,2.759224,1.062528,0.000000,0,0.000000,0.000000\r\n"
)


def test_emit_csv_golden_default_sweep_on_packaged_dataset() -> None:
    rows = run_experiment(_cfg(k_values=(1, 2, 3)), _dataset())
    buf = io.StringIO()
    emit_csv(rows, buf)
    assert buf.getvalue() == GOLDEN_DEFAULT_SWEEP


def test_emit_csv_contract() -> None:
    rows = run_experiment(_cfg(k_values=(2,), a0=2.0), path_graph(6))
    buf = io.StringIO()
    emit_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(CSV_COLUMNS) == 14
    parsed = list(csv.reader(io.StringIO(buf.getvalue())))
    assert len(parsed) == 2
    record = dict(zip(parsed[0], parsed[1]))
    assert record["algorithm"] == "cyclic"
    assert record["k"] == "2"
    assert record["rng_seed"] == "0"
    float_columns = ("peak", "avg", "lb_peak", "lb_avg", "peak_ratio",
                     "avg_ratio", "runtime_ms", "peak_std", "avg_std")
    for column in float_columns:
        assert re.fullmatch(r"-?\d+\.\d{6}", record[column])
    assert float(record["peak"]) == pytest.approx(rows[0].peak, abs=5e-7)


def _write_graph(tmp_path, text="0 1\n1 2\n0 2\n"):
    path = tmp_path / "graph.txt"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_cli_help_exits_zero(capsys) -> None:
    assert main(["--help"]) == 0
    assert "aoinet" in capsys.readouterr().out


def test_cli_missing_graph(capsys) -> None:
    assert main(["--k", "2"]) == 1
    assert "aoinet: error: --graph is required" in capsys.readouterr().err


def test_cli_bad_choice_exits_one() -> None:
    assert main(["--graph", "x", "--k", "1", "--algorithm", "sorcery"]) == 1


def test_cli_k_flags(tmp_path, capsys) -> None:
    graph = _write_graph(tmp_path)
    assert main(["--graph", graph]) == 1
    assert "one of --k or --k-max" in capsys.readouterr().err
    assert main(["--graph", graph, "--k", "1", "--k-max", "2"]) == 1
    assert "mutually exclusive" in capsys.readouterr().err
    assert main(["--graph", graph, "--k", "1,zap"]) == 1
    assert "--k expects integers" in capsys.readouterr().err
    assert main(["--graph", graph, "--k-max", "0"]) == 1
    capsys.readouterr()
    assert main(["--graph", graph, "--k-max", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("cyclic") == 3


def test_cli_unreadable_graph(tmp_path, capsys) -> None:
    assert main(["--graph", str(tmp_path / "missing.txt"), "--k", "1"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_cli_malformed_and_disconnected_graphs(tmp_path, capsys) -> None:
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\nwат\n", encoding="utf-8")
    assert main(["--graph", str(bad), "--k", "1"]) == 1
    assert "line 2" in capsys.readouterr().err
    split = tmp_path / "split.txt"
    split.write_text("0 1\n2 3\n", encoding="utf-8")
    assert main(["--graph", str(split), "--k", "1"]) == 1
    assert "disconnected" in capsys.readouterr().err


def test_cli_bad_horizon_value(tmp_path, capsys) -> None:
    graph = _write_graph(tmp_path)
    assert main(["--graph", graph, "--k", "1", "--horizon", "soon"]) == 1
    assert "--horizon expects an integer" in capsys.readouterr().err
    assert main(["--graph", graph, "--k", "9", "--horizon", "4"]) == 1
    assert "cannot fit" in capsys.readouterr().err


def test_cli_writes_csv_file(tmp_path) -> None:
    graph = _write_graph(tmp_path)
    out = tmp_path / "rows.csv"
    assert main(["--graph", graph, "--k", "1,2", "--output", str(out)]) == 0
    data = out.read_bytes()
    assert data.startswith(b"algorithm,")
    assert data.count(b"\r\n") == 3


def test_cli_unwritable_output(tmp_path, capsys) -> None:
    graph = _write_graph(tmp_path)
    target = str(tmp_path / "no" / "such" / "dir" / "rows.csv")
    assert main(["--graph", graph, "--k", "1", "--output", target]) == 2
    assert "cannot write" in capsys.readouterr().err


def test_cli_renders_figures(tmp_path, capsys) -> None:
    pytest.importorskip("matplotlib")
    graph = _write_graph(tmp_path)
    figures = tmp_path / "figs"
    out = tmp_path / "rows.csv"
    code = main(["--graph", graph, "--k-max", "3", "--output", str(out),
                 "--figures-dir", str(figures)])
    assert code == 0
    assert (figures / "peak_ratio.png").exists()
    assert (figures / "avg_ratio.png").exists()


def test_cli_figures_dir_collision_is_io_error(tmp_path, capsys) -> None:
    pytest.importorskip("matplotlib")
    graph = _write_graph(tmp_path)
    blocker = tmp_path / "blocked"
    blocker.write_text("not a directory", encoding="utf-8")
    out = tmp_path / "rows.csv"
    code = main(["--graph", graph, "--k", "1", "--output", str(out),
                 "--figures-dir", str(blocker)])
    assert code == 2
    assert "cannot write figures" in capsys.readouterr().err
