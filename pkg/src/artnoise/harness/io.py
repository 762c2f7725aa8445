from __future__ import annotations

import csv
import json
import math
import platform
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numba
import numpy as np
import scipy

from .. import __version__


@dataclass(frozen=True)
class ResultRow:
    """One aggregated point of an experiment.

    Error counts are stored next to the rates so ``rate * trials`` is exactly
    an integer.  ``snr_db`` is empty for dimension sweeps; error fields are
    empty for covering-ratio runs.
    """

    experiment: str
    precoder: str
    point_index: int
    snr_db: float | None
    n_a: int
    n_b: int
    n_e: int
    noise_norm: float
    trials: int
    bob_block_errors: int | None = None
    bob_block_error_rate: float | None = None
    bob_symbol_error_rate: float | None = None
    eve_block_errors: int | None = None
    eve_block_error_rate: float | None = None
    eve_symbol_error_rate: float | None = None
    mean_c_R: float | None = None
    pr_c_R_below_beta: float | None = None
    mean_total_power: float | None = None
    wall_time: float = 0.0


# wall_time varies run to run; it lives in the manifest so the CSV is reproducible
CSV_FIELDS = tuple(f.name for f in fields(ResultRow) if f.name != "wall_time")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def write_csv(rows, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        w.writerow(CSV_FIELDS)
        for row in rows:
            w.writerow([_cell(getattr(row, name)) for name in CSV_FIELDS])
    return path


def read_csv(path: str | Path) -> list[dict]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def software_versions() -> dict:
    return {
        "artnoise": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
        "platform": platform.platform(),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(data: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def manifest_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")
