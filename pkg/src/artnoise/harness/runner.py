"""Seeded Monte Carlo campaigns.

Each trial draws from its own generator seeded by
``derive_trial_seed(master, experiment, point, trial)``; workers process
contiguous trial chunks and the parent concatenates them in trial order, so
results do not depend on the worker count.
"""
from __future__ import annotations

import copy
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ArtnoiseError, ConfigError, RankDeficiencyError, TrialError
from ..lattice import LatticeBasis, babai_nearest_plane, cvp_sphere_decode, lll_reduce
from ..matcore import null_space, svd_decompose
from ..secrecy import (
    chi_convergence_check,
    covering_ratio,
    effective_eve_basis,
    logdet_clt_check,
    phi_for,
    phi_lp,
    required_noise_norm,
)
from ..wiretap import (
    WiretapScenario,
    bob_decode_lp,
    bob_decode_svd,
    eve_decode,
    precode,
    sample_artificial_noise,
    sample_channel,
    sample_secret,
    transmit_through,
)
from .config import ExperimentConfig
from .io import ResultRow
from .seeds import BOB_STREAM, CHANNEL_STREAM, EVE_STREAM, derive_trial_seed, trial_streams

POWER_IDENTITY_TOL = 1e-8
MAX_CHANNEL_RESAMPLES = 100


def warm_up() -> None:
    """Compile the numba kernels in this process before any fork."""
    L = LatticeBasis(np.array([[2.0, 1.0], [0.0, 1.0]]))
    cvp_sphere_decode(L, np.array([0.3, 0.2]))
    babai_nearest_plane(L, np.array([0.3, 0.2]))
    lll_reduce(L)


def _map_chunks(fn, jobs: list[tuple], parallelism: int) -> list:
    if parallelism <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    warm_up()
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
    with ProcessPoolExecutor(max_workers=parallelism, mp_context=ctx) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]


def _chunks(n: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, n)) for s in range(0, n, size)]


def noise_norm_for(cfg: ExperimentConfig, scen: WiretapScenario, precoder: str) -> float:
    """``beta e / Phi`` for the precoder, unless overridden; times ``noise_scale``."""
    if cfg.noise_norm is not None:
        base = cfg.noise_norm
    else:
        base = required_noise_norm(scen.beta, phi_for(precoder, scen.n_a, scen.n_b, scen.n_e))
    return base * cfg.noise_scale


def _sample_channels(scen: WiretapScenario, rng, seed: int, t: int, k: int):
    for _ in range(MAX_CHANNEL_RESAMPLES):
        H = sample_channel(scen.n_b, scen.n_a, rng)
        G = sample_channel(scen.n_e, scen.n_a, rng)
        try:
            null_space(H)
        except RankDeficiencyError:
            continue
        return H, G
    raise TrialError("no full-rank channel after resampling", seed, t, k)


@dataclass
class _PrecodedTrial:
    x: np.ndarray
    total_power: float
    eve_block_error: bool
    eve_symbol_errors: int
    c_R: float


@dataclass
class _Trial:
    index: int
    seed: int
    H: np.ndarray
    u: np.ndarray
    by_precoder: dict


def _error_rate_chunk(cfg: ExperimentConfig, start: int, stop: int) -> list[_Trial]:
    scen = cfg.scenario
    c = scen.constellation
    out = []
    for t in range(start, stop):
        seed = derive_trial_seed(cfg.master_seed, "error_rate", 0, t)
        try:
            streams = trial_streams(seed)
            rng, rng_eve = streams[CHANNEL_STREAM], streams[EVE_STREAM]
            H, G = _sample_channels(scen, rng, seed, t, 0)
            u = sample_secret(c, scen.n_b, rng)
            v_dir = sample_artificial_noise(scen.n_a - scen.n_b, 1.0, rng)
            res = {}
            for p in scen.precoders:
                v = v_dir * noise_norm_for(cfg, scen, p)
                rec = precode(p, H, u, v, c, cfg.lp_mode)
                gap = rec.power_identity_gap()
                if not gap <= POWER_IDENTITY_TOL:
                    raise TrialError(f"{p} power identity violated by {gap:.3e}", seed, t)
                # same Eve noise draw for both precoders
                y = transmit_through(G, rec.x, scen.sigma_e2, copy.deepcopy(rng_eve))
                u_eve = eve_decode(rec, y, G, H, c)
                wrong = u_eve != u
                basis = effective_eve_basis(p, G, H, rec.precoding_matrix)
                cr = covering_ratio(LatticeBasis(basis), G @ (rec.null_basis @ v), scen.beta)
                res[p] = _PrecodedTrial(rec.x, rec.total_power, bool(wrong.any()), int(wrong.sum()), cr.c_R)
        except TrialError:
            raise
        except ArtnoiseError as exc:
            raise TrialError(f"{type(exc).__name__}: {exc}", seed, t) from exc
        out.append(_Trial(t, seed, H, u, res))
    return out


def run_error_rate(cfg: ExperimentConfig) -> list[ResultRow]:
    """Bob and Eve block error rates per precoder and Bob SNR-per-bit point.

    Phase one (parallel) samples channels, precodes and runs Eve's exact
    decoder once per trial; Eve's outcome does not depend on Bob's SNR.
    Phase two sets ``sigma_B^2 = P_mean / (n_b log2 M 10^(snr/10))`` from the
    measured mean transmit power and decodes at Bob.  Every SNR point and
    precoder reuses the same channels and the same Bob noise direction.
    """
    if cfg.experiment != "error_rate":
        raise ConfigError(f"config is for {cfg.experiment!r}")
    scen = cfg.scenario
    c = scen.constellation
    t0 = time.perf_counter()
    jobs = [(cfg, a, b) for a, b in _chunks(cfg.n_trials, cfg.chunk_size)]
    trials = [tr for chunk in _map_chunks(_error_rate_chunk, jobs, cfg.parallelism) for tr in chunk]
    phase1 = time.perf_counter() - t0
    n = len(trials)

    rows = []
    for p in scen.precoders:
        powers = np.array([tr.by_precoder[p].total_power for tr in trials])
        c_r = np.array([tr.by_precoder[p].c_R for tr in trials])
        eve_blk = sum(tr.by_precoder[p].eve_block_error for tr in trials)
        eve_sym = sum(tr.by_precoder[p].eve_symbol_errors for tr in trials)
        mean_power = float(np.mean(powers))
        below = int(np.sum(c_r < scen.beta))
        for j, snr_db in enumerate(cfg.snr_grid_db):
            t1 = time.perf_counter()
            sigma2 = mean_power / (scen.n_b * c.bits_per_symbol * 10 ** (snr_db / 10))
            bob_blk = bob_sym = 0
            for tr in trials:
                rng_bob = trial_streams(tr.seed)[BOB_STREAM]
                z = transmit_through(tr.H, tr.by_precoder[p].x, sigma2, rng_bob)
                wrong = bob_decode_for(p, z, tr.H, c) != tr.u
                bob_blk += bool(wrong.any())
                bob_sym += int(wrong.sum())
            rows.append(ResultRow(
                experiment="error_rate", precoder=p, point_index=j, snr_db=float(snr_db),
                n_a=scen.n_a, n_b=scen.n_b, n_e=scen.n_e,
                noise_norm=noise_norm_for(cfg, scen, p), trials=n,
                bob_block_errors=bob_blk, bob_block_error_rate=bob_blk / n,
                bob_symbol_error_rate=bob_sym / (n * scen.n_b),
                eve_block_errors=eve_blk, eve_block_error_rate=eve_blk / n,
                eve_symbol_error_rate=eve_sym / (n * scen.n_b),
                mean_c_R=float(np.mean(c_r)), pr_c_R_below_beta=below / n,
                mean_total_power=mean_power,
                wall_time=time.perf_counter() - t1 + phase1 / (len(scen.precoders) * len(cfg.snr_grid_db)),
            ))
    return rows


def bob_decode_for(precoder: str, z, H, c):
    if precoder == "svd":
        return bob_decode_svd(z, H, c)
    return bob_decode_lp(z, c)


def _covering_chunk(cfg: ExperimentConfig, k: int, start: int, stop: int) -> dict:
    scen = cfg.points()[k]
    out = {p: np.empty(stop - start) for p in scen.precoders}
    for i, t in enumerate(range(start, stop)):
        seed = derive_trial_seed(cfg.master_seed, "covering_ratio", k, t)
        try:
            rng = trial_streams(seed)[CHANNEL_STREAM]
            H, G = _sample_channels(scen, rng, seed, t, k)
            Z = null_space(H)
            v_dir = sample_artificial_noise(scen.n_a - scen.n_b, 1.0, rng)
            gz = G @ (Z @ v_dir)
            for p in scen.precoders:
                P = svd_decompose(H)[2][:, :scen.n_b] if p == "svd" else None
                basis = LatticeBasis(effective_eve_basis(p, G, H, P))
                out[p][i] = covering_ratio(basis, gz * noise_norm_for(cfg, scen, p), scen.beta).c_R
        except TrialError:
            raise
        except ArtnoiseError as exc:
            raise TrialError(f"{type(exc).__name__}: {exc}", seed, t, k) from exc
    return out


def covering_samples(cfg: ExperimentConfig) -> list[dict[str, np.ndarray]]:
    """Per dimension point, the trial-ordered ``c_R`` samples per precoder."""
    points = cfg.points()
    jobs = [(cfg, k, a, b) for k in range(len(points)) for a, b in _chunks(cfg.n_trials, cfg.chunk_size)]
    parts = _map_chunks(_covering_chunk, jobs, cfg.parallelism)
    samples = [{p: [] for p in scen.precoders} for scen in points]
    for (_, k, _, _), part in zip(jobs, parts):
        for p, arr in part.items():
            samples[k][p].append(arr)
    return [{p: np.concatenate(v) for p, v in s.items()} for s in samples]


def c_r_histogram(values: np.ndarray, bins: int = 40) -> dict:
    hi = max(1.0, float(np.ceil(np.max(values)))) if values.size else 1.0
    counts, edges = np.histogram(values, bins=bins, range=(0.0, hi))
    return {"edges": edges.tolist(), "counts": counts.tolist()}


def run_covering_ratio(cfg: ExperimentConfig, histograms: dict | None = None) -> list[ResultRow]:
    """Estimate ``Pr(c_R < beta)`` per dimension point and precoder.

    If ``histograms`` is a dict it is filled with ``"{k}/{precoder}"`` keyed
    ``c_R`` histograms.
    """
    if cfg.experiment != "covering_ratio":
        raise ConfigError(f"config is for {cfg.experiment!r}")
    t0 = time.perf_counter()
    samples = covering_samples(cfg)
    elapsed = time.perf_counter() - t0
    points = cfg.points()
    n_rows = sum(len(s.precoders) for s in points)
    rows = []
    for k, (scen, per_p) in enumerate(zip(points, samples)):
        for p in scen.precoders:
            vals = per_p[p]
            below = int(np.sum(vals < scen.beta))
            if histograms is not None:
                histograms[f"{k}/{p}"] = c_r_histogram(vals)
            rows.append(ResultRow(
                experiment="covering_ratio", precoder=p, point_index=k, snr_db=None,
                n_a=scen.n_a, n_b=scen.n_b, n_e=scen.n_e,
                noise_norm=noise_norm_for(cfg, scen, p), trials=vals.size,
                mean_c_R=float(np.mean(vals)), pr_c_R_below_beta=below / vals.size,
                wall_time=elapsed / n_rows,
            ))
    return rows


DISTRIBUTION_MIN_TRIALS = 10_000


def run_distribution_checks(cfg: ExperimentConfig) -> dict:
    """Chi or log-determinant check; returns a JSON-ready report."""
    if cfg.experiment not in ("chi_check", "logdet_check"):
        raise ConfigError(f"distribution checks need chi_check or logdet_check, got {cfg.experiment!r}")
    if cfg.n_trials < DISTRIBUTION_MIN_TRIALS:
        raise ConfigError(f"{cfg.experiment} needs n_trials >= {DISTRIBUTION_MIN_TRIALS}")
    scen = cfg.scenario
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, 0, 0)
    t0 = time.perf_counter()
    if cfg.experiment == "chi_check":
        base = cfg.noise_norm if cfg.noise_norm is not None else required_noise_norm(
            scen.beta, phi_lp(scen.n_a, scen.n_b, scen.n_e))
        norm_v = base * cfg.noise_scale
        if not norm_v > 0:
            raise ConfigError("chi check needs a positive noise norm")
        rep = chi_convergence_check(scen.n_e, norm_v, cfg.n_trials, seed, n_a=scen.n_a, n_b=scen.n_b)
    else:
        rep = logdet_clt_check(scen.n_a, scen.n_b, cfg.n_trials, seed)
    return {
        "experiment": cfg.experiment,
        "seed": seed,
        "passed": rep.passed,
        "statistics": rep.to_dict(),
        "wall_time": time.perf_counter() - t0,
    }
