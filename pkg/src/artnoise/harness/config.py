from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..errors import ConfigError
from ..wiretap import WiretapScenario

EXPERIMENTS = ("error_rate", "covering_ratio", "chi_check", "logdet_check", "lattice_selftest")

FIG2_SCENARIO = WiretapScenario(n_a=10, n_b=9, n_e=20, M=64, sigma_e2=0.0, beta=1.0, precoder="both")
DEFAULT_SNR_GRID_DB = tuple(float(s) for s in range(0, 31, 3))

_DEFAULT_TRIALS = {
    "error_rate": 1000,
    "covering_ratio": 10_000,
    "chi_check": 100_000,
    "logdet_check": 10_000,
    "lattice_selftest": 10_000,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One batch run.

    ``noise_norm`` overrides the artificial-noise rule ``beta e / Phi`` (0
    disables the noise); ``noise_scale`` multiplies whichever norm is used.
    ``sweep`` lists ``(n_a, n_b, n_e)`` points for the covering-ratio run.
    """

    experiment: str
    scenario: WiretapScenario = FIG2_SCENARIO
    snr_grid_db: tuple[float, ...] = DEFAULT_SNR_GRID_DB
    n_trials: int = 1000
    master_seed: int = 2013
    parallelism: int = 1
    lp_mode: str = "exact"
    noise_norm: float | None = None
    noise_scale: float = 1.0
    sweep: tuple[tuple[int, int, int], ...] | None = None
    chunk_size: int = 50
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if int(self.n_trials) < 1:
            raise ConfigError("n_trials must be >= 1")
        if self.experiment == "error_rate" and len(self.snr_grid_db) == 0:
            raise ConfigError("snr_grid_db must be non-empty for error_rate")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if int(self.parallelism) < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.lp_mode not in ("exact", "babai"):
            raise ConfigError(f"lp_mode must be 'exact' or 'babai', got {self.lp_mode!r}")
        if self.noise_norm is not None and self.noise_norm < 0:
            raise ConfigError("noise_norm must be non-negative")
        if not self.noise_scale > 0:
            raise ConfigError("noise_scale must be positive")
        if self.chunk_size < 1:
            raise ConfigError("chunk_size must be >= 1")
        if self.sweep is not None:
            for point in self.sweep:
                if len(point) != 3:
                    raise ConfigError(f"sweep points are (n_a, n_b, n_e) triples, got {point!r}")
                n_a, n_b, n_e = point
                replace(self.scenario, n_a=n_a, n_b=n_b, n_e=n_e)

    def points(self) -> list[WiretapScenario]:
        if not self.sweep:
            return [self.scenario]
        return [replace(self.scenario, n_a=a, n_b=b, n_e=e) for a, b, e in self.sweep]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["snr_grid_db"] = list(self.snr_grid_db)
        d["sweep"] = [list(p) for p in self.sweep] if self.sweep else None
        return d


_SCENARIO_KEYS = {f.name for f in fields(WiretapScenario)}
_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)} - {"extra"}


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    overrides.setdefault("n_trials", _DEFAULT_TRIALS.get(experiment, 1000))
    return ExperimentConfig(experiment=experiment, **overrides)


def config_from_dict(data: dict, experiment: str | None = None) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data = dict(data)
    if experiment is not None:
        if data.get("experiment", experiment) != experiment:
            raise ConfigError(
                f"config is for {data['experiment']!r}, command runs {experiment!r}"
            )
        data["experiment"] = experiment
    if "experiment" not in data:
        raise ConfigError("config lacks 'experiment'")
    scen = data.get("scenario")
    if scen is not None:
        if not isinstance(scen, dict):
            raise ConfigError("scenario must be an object")
        bad = set(scen) - _SCENARIO_KEYS
        if bad:
            raise ConfigError(f"unknown scenario keys: {sorted(bad)}")
        try:
            data["scenario"] = WiretapScenario(**scen)
        except TypeError as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc
    if "snr_grid_db" in data:
        data["snr_grid_db"] = tuple(float(x) for x in data["snr_grid_db"])
    if data.get("sweep") is not None:
        data["sweep"] = tuple(tuple(int(v) for v in p) for p in data["sweep"])
    data.setdefault("n_trials", _DEFAULT_TRIALS[data["experiment"]]
                    if data["experiment"] in _DEFAULT_TRIALS else 1000)
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def load_config(path: str | Path, experiment: str | None = None) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data, experiment)
