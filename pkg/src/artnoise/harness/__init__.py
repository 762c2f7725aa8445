"""Experiment configuration, seeded Monte Carlo runners and the command line."""
from .config import EXPERIMENTS, ExperimentConfig, config_from_dict, default_config, load_config
from .io import CSV_FIELDS, ResultRow, read_csv, write_csv
from .runner import run_covering_ratio, run_distribution_checks, run_error_rate
from .seeds import derive_trial_seed
from .selftest import run_lattice_selftest

__all__ = [
    "CSV_FIELDS",
    "EXPERIMENTS",
    "ExperimentConfig",
    "ResultRow",
    "config_from_dict",
    "default_config",
    "derive_trial_seed",
    "load_config",
    "read_csv",
    "run_covering_ratio",
    "run_distribution_checks",
    "run_error_rate",
    "run_lattice_selftest",
    "write_csv",
]
