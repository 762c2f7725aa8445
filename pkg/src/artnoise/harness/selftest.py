"""Randomised cross-checks of the lattice routines against brute force."""
from __future__ import annotations

import math
import time

import numpy as np

from ..lattice import (
    LatticeBasis,
    babai_nearest_plane,
    covering_radius_upper_bound,
    cvp_sphere_decode,
    dual_basis,
    is_lll_reduced,
    lll_reduce,
    svp_shortest,
)
from ..lattice.oracles import coefficient_box, cvp_exhaustive, sampled_deep_hole
from .config import ExperimentConfig
from .seeds import derive_trial_seed

MAX_BOX_POINTS = 200_000
GH_WINDOW = (0.8, 1.2)


def random_instance(rng, max_real_dim: int = 6):
    """Random real or complex Gaussian basis (possibly tall) and a target."""
    n = int(rng.integers(1, max_real_dim + 1))
    if n % 2 == 0 and rng.random() < 0.5:
        k = n // 2
        m = k + int(rng.integers(0, 2))
        B = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / math.sqrt(2)
        t = B @ (rng.uniform(-3, 3, k) + 1j * rng.uniform(-3, 3, k))
        t += (rng.standard_normal(m) + 1j * rng.standard_normal(m)) * 0.5
    else:
        m = n + int(rng.integers(0, 2))
        B = rng.standard_normal((m, n))
        t = B @ rng.uniform(-3, 3, n) + rng.standard_normal(m) * 0.5
    return B, t


def _cvp_instance(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    resamples = 0
    while True:
        B, t = random_instance(rng)
        L = LatticeBasis(B)
        tr = L.to_real(t)
        bab = babai_nearest_plane(L, t)
        ranges = coefficient_box(L.real_basis, tr, bab.distance * (1 + 1e-9) + 1e-12)
        if math.prod(len(r) for r in ranges) <= MAX_BOX_POINTS:
            break
        resamples += 1
    exact = cvp_sphere_decode(L, t)
    _, d_ex = cvp_exhaustive(L.real_basis, tr, bab.distance)
    n = L.dim
    Lr, U = lll_reduce(L)
    unimodular = abs(round(np.linalg.det(U.astype(float)))) == 1 and np.allclose(Lr.basis, L.real_basis @ U)
    return {
        "dim": n,
        "resamples": resamples,
        "cvp_match": abs(exact.distance - d_ex) <= 1e-9 * max(1.0, d_ex),
        "babai_ratio": bab.distance / exact.distance if exact.distance > 0 else 1.0,
        "babai_ok": bab.distance <= 2 ** (n / 2) * exact.distance * (1 + 1e-9) + 1e-12,
        "lll_ok": bool(is_lll_reduced(Lr.basis, 0.75)) and bool(unimodular),
    }


def gaussian_heuristic_ratio(n_b: int, rng) -> float:
    """``lambda_1 / (sqrt(n_b / (pi e)) |det|^(1/n_b))`` for the dual of a random complex basis."""
    B = (rng.standard_normal((n_b, n_b)) + 1j * rng.standard_normal((n_b, n_b))) / math.sqrt(2)
    D = dual_basis(LatticeBasis(B))
    _, lam = svp_shortest(D)
    gh = math.sqrt(n_b / (math.pi * math.e)) * math.exp(D.log_volume / (2 * n_b))
    return lam / gh


def run_lattice_selftest(cfg: ExperimentConfig, *, n_cover_bases: int = 20, deep_hole_samples: int = 300,
                         n_gh: int = 200, gh_dim: int = 8) -> dict:
    """CVP vs exhaustive search, Babai and LLL guarantees, covering bound and Gaussian heuristic."""
    t0 = time.perf_counter()
    inst = [_cvp_instance(derive_trial_seed(cfg.master_seed, "lattice_selftest", 0, i))
            for i in range(cfg.n_trials)]
    mismatches = sum(not r["cvp_match"] for r in inst)
    babai_fail = sum(not r["babai_ok"] for r in inst)
    lll_fail = sum(not r["lll_ok"] for r in inst)

    cover = []
    for i in range(n_cover_bases):
        rng = np.random.default_rng(derive_trial_seed(cfg.master_seed, "lattice_selftest", 1, i))
        # alternate 2-D and 4-D real lattices, real and complex
        if i % 4 == 0:
            B = rng.standard_normal((2, 2))
        elif i % 4 == 1:
            B = rng.standard_normal((4, 4))
        elif i % 4 == 2:
            B = (rng.standard_normal((1, 1)) + 1j * rng.standard_normal((1, 1)))
        else:
            B = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
        L = LatticeBasis(B)
        bound = covering_radius_upper_bound(L)
        hole = sampled_deep_hole(L, deep_hole_samples, rng)
        cover.append({"dim": L.dim, "bound": bound, "deep_hole": hole, "ok": bound >= hole})
    cover_fail = sum(not c["ok"] for c in cover)

    rng = np.random.default_rng(derive_trial_seed(cfg.master_seed, "lattice_selftest", 2, 0))
    gh = np.array([gaussian_heuristic_ratio(gh_dim, rng) for _ in range(n_gh)])
    gh_mean = float(np.mean(gh))
    gh_ok = GH_WINDOW[0] <= gh_mean <= GH_WINDOW[1]

    checks = {
        "cvp_vs_exhaustive": mismatches == 0,
        "babai_bound": babai_fail == 0,
        "lll_conditions": lll_fail == 0,
        "covering_bound": cover_fail == 0,
        "gaussian_heuristic": gh_ok,
    }
    return {
        "experiment": "lattice_selftest",
        "master_seed": cfg.master_seed,
        "passed": all(checks.values()),
        "checks": checks,
        "cvp_instances": len(inst),
        "cvp_mismatches": mismatches,
        "box_resamples": sum(r["resamples"] for r in inst),
        "instances_by_dim": {str(d): sum(r["dim"] == d for r in inst) for d in sorted({r["dim"] for r in inst})},
        "babai_failures": babai_fail,
        "babai_max_ratio": max(r["babai_ratio"] for r in inst),
        "lll_failures": lll_fail,
        "covering": cover,
        "covering_failures": cover_fail,
        "gaussian_heuristic_mean": gh_mean,
        "gaussian_heuristic_std": float(np.std(gh, ddof=1)),
        "gaussian_heuristic_window": list(GH_WINDOW),
        "gaussian_heuristic_dim": gh_dim,
        "wall_time": time.perf_counter() - t0,
    }
