"""``artnoise`` command line.

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from ..errors import ArtnoiseError, ConfigError
from .config import ExperimentConfig, default_config, load_config
from .io import manifest_path, software_versions, write_csv, write_json
from .runner import run_covering_ratio, run_distribution_checks, run_error_rate
from .selftest import run_lattice_selftest

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

COMMANDS = {
    "error-rate": "error_rate",
    "covering-ratio": "covering_ratio",
    "chi-check": "chi_check",
    "logdet-check": "logdet_check",
    "lattice-selftest": "lattice_selftest",
}

_DEFAULT_OUT = {
    "error_rate": "results/error_rate.csv",
    "covering_ratio": "results/covering_ratio.csv",
    "chi_check": "results/chi_check.json",
    "logdet_check": "results/logdet_check.json",
    "lattice_selftest": "results/lattice_selftest.json",
}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artnoise", description="Artificial-noise MIMO wiretap experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON experiment config")
        p.add_argument("--seed", type=_u64, help="master seed (overrides config)")
        p.add_argument("--trials", type=int, help="trials per point (overrides config)")
        p.add_argument("--out", type=Path, help="output path (CSV or JSON report)")
        p.add_argument("--parallelism", type=int, help="worker processes")
        p.add_argument("--precoder", choices=("svd", "lattice", "both"))
    return parser


def resolve_config(args) -> ExperimentConfig:
    experiment = COMMANDS[args.command]
    cfg = load_config(args.config, experiment) if args.config else default_config(experiment)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if args.precoder is not None:
        overrides["scenario"] = replace(cfg.scenario, precoder=args.precoder)
    return replace(cfg, **overrides) if overrides else cfg


def _manifest(cfg: ExperimentConfig, started: float, **extra) -> dict:
    return {
        "config": cfg.to_dict(),
        "master_seed": cfg.master_seed,
        "seed_derivation": "blake2b-64(master_seed, experiment_id, point_index, trial_index)"
                           " -> SeedSequence.spawn(3) = (channel, bob, eve)",
        "versions": software_versions(),
        "wall_time": time.perf_counter() - started,
        **extra,
    }


def execute(cfg: ExperimentConfig, out: Path) -> dict:
    started = time.perf_counter()
    if cfg.experiment in ("error_rate", "covering_ratio"):
        hist: dict = {}
        rows = run_error_rate(cfg) if cfg.experiment == "error_rate" else run_covering_ratio(cfg, hist)
        write_csv(rows, out)
        extra = {"rows": len(rows), "row_wall_time": [r.wall_time for r in rows]}
        if hist:
            extra["c_R_histograms"] = hist
        write_json(_manifest(cfg, started, **extra), manifest_path(out))
        return {"rows": rows}
    if cfg.experiment == "lattice_selftest":
        report = run_lattice_selftest(cfg)
    else:
        report = run_distribution_checks(cfg)
    write_json({**report, "manifest": _manifest(cfg, started)}, out)
    return report


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or Path(_DEFAULT_OUT[cfg.experiment])
    try:
        result = execute(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArtnoiseError, ValueError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if "rows" in result:
        print(f"wrote {len(result['rows'])} rows to {out}")
    else:
        print(f"{cfg.experiment}: {'PASS' if result['passed'] else 'FAIL'} (report {out})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
