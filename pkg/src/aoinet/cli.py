"""Command-line front end for the experiment harness.

Exit codes: 0 on success, 1 on validation problems (bad flags, malformed
or disconnected graphs), 2 on I/O failures (unreadable input, unwritable
output).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .graphs import DisconnectedGraphError, EdgeListError, load_edge_list
from .harness import ALGORITHMS, DELAY_MODES, OBJECTIVES, ConfigError, ExperimentConfig, emit_csv, run_experiment

__all__ = ["build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aoinet",
        description="Sweep a seeding planner over round budgets and emit CSV results.",
    )
    p.add_argument("--graph", metavar="PATH", help="edge list file: 'u v [delay]' per line")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="cyclic")
    p.add_argument("--objective", choices=OBJECTIVES, default="both")
    p.add_argument("--k", metavar="LIST", help="round budgets, comma separated (e.g. 5 or 1,2,8)")
    p.add_argument("--k-max", type=int, metavar="N", help="sweep k = 1..N")
    p.add_argument("--delta", type=int, default=1, help="slots between promotions (default 1)")
    p.add_argument("--a0", type=float, default=1.0, help="initial age (default 1)")
    p.add_argument("--a0-random", action="store_true",
                   help="draw per-node initial ages uniformly with mean --a0")
    p.add_argument("--horizon", default="auto",
                   help="end time, or 'auto' for completion-sized windows (default)")
    p.add_argument("--seeds-per-round", type=int, default=1)
    p.add_argument("--delay-mode", choices=DELAY_MODES, default="unit")
    p.add_argument("--trials", type=int, default=10,
                   help="trials per sweep point in randomized settings (default 10)")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--output", metavar="PATH", default="-", help="CSV sink, '-' for stdout")
    p.add_argument("--drop-isolated", action="store_true",
                   help="drop nodes with no incident edges instead of failing")
    p.add_argument("--timing", action="store_true",
                   help="measure wall-clock runtime per row (breaks byte determinism)")
    p.add_argument("--figures-dir", metavar="DIR",
                   help="also render ratio curves as PNGs into DIR (needs matplotlib)")
    return p


def _fail(message: str, code: int) -> int:
    print(f"aoinet: error: {message}", file=sys.stderr)
    return code


def _parse_k_values(args: argparse.Namespace) -> tuple[int, ...]:
    if args.k is not None and args.k_max is not None:
        raise ConfigError("--k and --k-max are mutually exclusive")
    if args.k is not None:
        try:
            values = tuple(int(part) for part in args.k.split(",") if part.strip())
        except ValueError:
            raise ConfigError(f"--k expects integers, got {args.k!r}") from None
        if not values:
            raise ConfigError("--k expects at least one integer")
        return values
    if args.k_max is not None:
        if args.k_max < 1:
            raise ConfigError("--k-max must be a positive integer")
        return tuple(range(1, args.k_max + 1))
    raise ConfigError("one of --k or --k-max is required")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse already printed usage/help
        code = exit_.code or 0
        return 0 if code == 0 else 1

    if not args.graph:
        return _fail("--graph is required", 1)
    horizon: int | str = args.horizon
    if horizon != "auto":
        try:
            horizon = int(horizon)
        except ValueError:
            return _fail(f"--horizon expects an integer or 'auto', got {horizon!r}", 1)

    try:
        cfg = ExperimentConfig(
            graph_path=args.graph,
            algorithm=args.algorithm,
            objective=args.objective,
            k_values=_parse_k_values(args),
            delta=args.delta,
            a0=args.a0,
            a0_random=args.a0_random,
            horizon=horizon,
            seeds_per_round=args.seeds_per_round,
            delay_mode=args.delay_mode,
            trials=args.trials,
            rng_seed=args.rng_seed,
            drop_isolated=args.drop_isolated,
            timing=args.timing,
        )
        cfg.validate()
    except ConfigError as err:
        return _fail(str(err), 1)

    try:
        with open(args.graph, "r", encoding="utf-8") as fh:
            graph = load_edge_list(fh, drop_isolated=args.drop_isolated)
    except OSError as err:
        return _fail(f"cannot read {args.graph}: {err}", 2)
    except (EdgeListError, DisconnectedGraphError) as err:
        return _fail(f"{args.graph}: {err}", 1)

    try:
        rows = run_experiment(cfg, graph=graph)
    except (ConfigError, ValueError) as err:
        return _fail(str(err), 1)

    try:
        if args.output == "-":
            emit_csv(rows, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as out:
                emit_csv(rows, out)
    except OSError as err:
        return _fail(f"cannot write {args.output}: {err}", 2)

    if args.figures_dir:
        try:
            from .figures import render_figures
            render_figures(rows, args.figures_dir)
        except ModuleNotFoundError:
            return _fail("figure rendering needs matplotlib (install extra 'figures')", 1)
        except OSError as err:
            return _fail(f"cannot write figures to {args.figures_dir}: {err}", 2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
