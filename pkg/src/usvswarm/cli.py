"""Command-line front end: ``run``, ``compare``, ``preset`` and ``plot``.

Exit codes: 0 success, 1 I/O failure or malformed CSV, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io as swarm_io
from .compare import ComparisonSpec, parse_strategies, run_comparison
from .core import InvalidParam, dump_config, load_config, with_apso, with_overrides
from .engine import run
from .plots import MalformedCsv, comparison_svg, plot_files
from .presets import PRESET_NAMES, preset

EXIT_OK, EXIT_IO, EXIT_CONFIG = 0, 1, 2


def _err(msg: str) -> None:
    print(f"usvswarm: {msg}", file=sys.stderr)


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidParam("config", f"cannot read {path}: {exc.strerror}") from None
    return load_config(text)


def _comparison_csv(t, cols: dict) -> str:
    names = [s.value for s in cols]
    rows = ([int(t[i])] + [float(cols[s][i]) for s in cols] for i in range(len(t)))
    return swarm_io._csv_text(["t", *names], rows)


def cmd_run(args) -> int:
    try:
        cfg = _load(args.config)
        if args.seed is not None:
            cfg = with_overrides(cfg, seed=args.seed)
        if args.iterations is not None:
            cfg = with_apso(cfg, total_iterations=args.iterations)
    except InvalidParam as exc:
        _err(str(exc))
        return EXIT_CONFIG
    trace = run(cfg)
    try:
        swarm_io.write_run(trace, Path(args.out))
    except OSError as exc:
        _err(f"cannot write outputs to {args.out}: {exc}")
        return EXIT_IO
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        cfg = _load(args.config)
        if args.iterations is not None:
            cfg = with_apso(cfg, total_iterations=args.iterations)
        spec = ComparisonSpec(cfg, parse_strategies(args.strategies), args.seeds, args.seed_base)
    except InvalidParam as exc:
        _err(str(exc))
        return EXIT_CONFIG
    res = run_comparison(spec, jobs=args.jobs)
    mean_csv = _comparison_csv(res.t, res.mean)
    files = {
        "comparison.csv": mean_csv,
        "comparison_std.csv": _comparison_csv(res.t, res.std),
    }
    files["comparison.svg"] = comparison_svg(res.t, {s.value: list(m) for s, m in res.mean.items()})
    try:
        swarm_io.write_files_atomically(Path(args.out), files)
    except OSError as exc:
        _err(f"cannot write outputs to {args.out}: {exc}")
        return EXIT_IO
    for s, v in res.final_means().items():
        print(f"{s.value}: final mean avg_min_dist {v:.4f}")
    return EXIT_OK


def cmd_preset(args) -> int:
    try:
        cfg = preset(args.name)
    except KeyError:
        _err(f"unknown preset {args.name!r}; valid names: {', '.join(PRESET_NAMES)}")
        return EXIT_CONFIG
    sys.stdout.write(dump_config(cfg))
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        files = plot_files(Path(args.input))
    except MalformedCsv as exc:
        _err(str(exc))
        return EXIT_IO
    except OSError as exc:
        _err(f"cannot read {args.input}: {exc.strerror}")
        return EXIT_IO
    try:
        swarm_io.write_files_atomically(Path(args.out), files)
    except OSError as exc:
        _err(f"cannot write outputs to {args.out}: {exc}")
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="usvswarm", description="USV swarm search-and-track simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation and write trajectories, metrics and a summary")
    p.add_argument("--config", required=True, help="scenario JSON (see `usvswarm preset`)")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int, help="override total iterations T")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="mean distance-to-target curves per search strategy over many seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--strategies", required=True, help="comma list of RandomWalk,Spiral,Lawnmower,Cluster,Mixed")
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--iterations", type=int)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output does not depend on this)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("preset", help="print a named scenario as JSON")
    p.add_argument("name", help=", ".join(PRESET_NAMES))
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("plot", help="SVG plots from metrics.csv or comparison.csv")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
