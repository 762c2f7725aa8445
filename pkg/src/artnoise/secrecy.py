"""Covering ratio, the artificial-noise power rule and the distributional
checks behind the covering-ratio tail bound.

The covering ratio of Eve's received lattice is
``c_R = ||G Z v|| / r_eff(Lambda)``, with ``Lambda`` generated by ``G P``
(SVD precoding) or ``G H^+`` (lattice precoding) and ``r_eff`` in its
asymptotic form.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats
from scipy.special import digamma, polygamma

from .errors import DimensionError
from .lattice import LatticeBasis, effective_radius
from .matcore import null_space, pseudoinverse, qr_decompose

PI_E = math.pi * math.e


def _lfact(n: int) -> float:
    return math.lgamma(n + 1)


def phi_lp(n_a: int, n_b: int, n_e: int) -> float:
    """Noise-power normaliser for lattice precoding.

    ``[(n_e - n_b)! / (n_a - n_b)! * n_a! / n_e!] ** (1 / (2 n_b))``,
    evaluated in the log domain.  Requires ``n_b < n_a <= n_e``.
    """
    if not (1 <= n_b < n_a <= n_e):
        raise DimensionError(f"phi_lp needs 1 <= n_b < n_a <= n_e, got ({n_a}, {n_b}, {n_e})")
    log = _lfact(n_e - n_b) - _lfact(n_a - n_b) + _lfact(n_a) - _lfact(n_e)
    return math.exp(log / (2 * n_b))


def phi_svd(n_b: int, n_e: int) -> float:
    """Noise-power normaliser for SVD precoding, ``[(n_e - n_b)! / n_e! * sqrt(n_b)] ** (1 / (2 n_b))``."""
    if not (1 <= n_b <= n_e):
        raise DimensionError(f"phi_svd needs 1 <= n_b <= n_e, got ({n_b}, {n_e})")
    log = _lfact(n_e - n_b) - _lfact(n_e) + 0.5 * math.log(n_b)
    return math.exp(log / (2 * n_b))


def phi_for(precoder: str, n_a: int, n_b: int, n_e: int) -> float:
    if precoder == "lattice":
        return phi_lp(n_a, n_b, n_e)
    if precoder == "svd":
        return phi_svd(n_b, n_e)
    raise ValueError(f"unknown precoder {precoder!r}")


def required_noise_norm(beta: float, phi: float) -> float:
    """Artificial-noise norm ``beta * e / phi``."""
    if not (beta > 0 and phi > 0):
        raise ValueError("beta and phi must be positive")
    return beta * math.e / phi


@dataclass(frozen=True)
class SecrecyAssessment:
    c_R: float
    r_eff: float
    interference_norm: float
    beta: float
    pi_e_threshold_met: bool
    beta_met: bool


def effective_eve_basis(precoder: str, G, H=None, P=None) -> np.ndarray:
    """``G P`` for SVD precoding, ``G H^+`` for lattice precoding."""
    G = np.asarray(G, dtype=complex)
    if precoder == "svd":
        if P is None:
            raise ValueError("SVD precoding needs the precoding matrix P")
        return G @ np.asarray(P, dtype=complex)
    if precoder == "lattice":
        if H is None:
            raise ValueError("lattice precoding needs Bob's channel H")
        return G @ pseudoinverse(H)
    raise ValueError(f"unknown precoder {precoder!r}")


def covering_ratio(eff_basis: LatticeBasis, interference, beta: float = 1.0) -> SecrecyAssessment:
    r_eff = effective_radius(eff_basis, "asymptotic")
    norm = float(np.linalg.norm(np.asarray(interference)))
    c = norm / r_eff
    return SecrecyAssessment(
        c_R=c, r_eff=r_eff, interference_norm=norm, beta=beta,
        pi_e_threshold_met=c >= PI_E, beta_met=c >= beta,
    )


def covering_ratio_lp_decomposed(G, H, v, Z=None) -> float:
    """Covering ratio under lattice precoding via ``H^H = Q_H R_H``.

    ``c_R = ||G Z v|| det(R_H)^(1/N) / (sqrt(N / (pi e)) |det(G Q_H)|^(1/N))``
    where, for tall ``G Q_H``, ``|det|`` is ``sqrt(det((G Q_H)^H G Q_H))``.
    """
    G = np.asarray(G, dtype=complex)
    H = np.asarray(H, dtype=complex)
    n_b = H.shape[0]
    if Z is None:
        Z = null_space(H)
    Q, R = qr_decompose(H.conj().T)
    log_det_r = float(np.sum(np.log(np.diagonal(R).real)))
    _, R_gq = qr_decompose(G @ Q)
    log_det_gq = float(np.sum(np.log(np.diagonal(R_gq).real)))
    interference = float(np.linalg.norm(G @ (Z @ np.asarray(v, dtype=complex))))
    return interference * math.exp((log_det_r - log_det_gq) / n_b) / math.sqrt(n_b / PI_E)


def bound_exponent(n_b: int, n_e: int) -> float:
    """Decay exponent ``min(n_b^2 / ln n_b, n_e)`` of the covering-ratio tail."""
    if n_b < 2:
        raise DimensionError("bound exponent needs n_b >= 2")
    if n_e < 1:
        raise DimensionError("bound exponent needs n_e >= 1")
    return min(n_b * n_b / math.log(n_b), float(n_e))


def chi_tail_ratio(n_b: int, n_e: int) -> float:
    """``gamma = n_b / (e^2 n_e)``, the chi-square lower-tail ratio."""
    return n_b / (math.e**2 * n_e)


def chi_tail_bound(n_b: int, n_e: int) -> float:
    """Chernoff bound ``(gamma e^(1 - gamma))^n_e`` on ``Pr{chi2(2 n_e) <= 2 n_b / e^2}``."""
    g = chi_tail_ratio(n_b, n_e)
    return (g * math.exp(1 - g)) ** n_e


# ---------------------------------------------------------------------------
# distribution checks

SIGNIFICANCE = 0.01


def _as_rng(rng):
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), rng


@dataclass(frozen=True)
class ChiCheckReport:
    n_e: int
    norm_v: float
    n_trials: int
    direction: str
    mean_scaled_energy: float
    expected_mean: float
    mean_rel_error: float
    var_scaled_energy: float
    expected_var: float
    ks_statistic: float
    ks_pvalue: float
    significance: float
    moment_passed: bool
    ks_passed: bool
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.moment_passed and self.ks_passed

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def sample_interference(n_a: int, n_b: int, n_e: int, norm_v: float, n_trials: int, rng,
                        direction: str = "random", batch: int = 10_000) -> np.ndarray:
    """Draw ``||G Z v||`` with fresh ``H``, ``G`` and ``v`` per trial."""
    out = np.empty(n_trials)
    k = n_a - n_b
    done = 0
    while done < n_trials:
        b = min(batch, n_trials - done)
        H = (rng.standard_normal((b, n_b, n_a)) + 1j * rng.standard_normal((b, n_b, n_a))) / math.sqrt(2)
        G = (rng.standard_normal((b, n_e, n_a)) + 1j * rng.standard_normal((b, n_e, n_a))) / math.sqrt(2)
        _, _, Vh = np.linalg.svd(H, full_matrices=True)
        Z = Vh[:, n_b:, :].conj().transpose(0, 2, 1)
        if direction == "random":
            v = rng.uniform(-1, 1, (b, k)) + 1j * rng.uniform(-1, 1, (b, k))
        elif direction == "basis":
            v = np.zeros((b, k), dtype=complex)
            v[:, 0] = 1.0
        else:
            raise ValueError(f"unknown direction {direction!r}")
        v *= (norm_v / np.linalg.norm(v, axis=1))[:, None]
        gzv = G @ (Z @ v[:, :, None])
        out[done:done + b] = np.linalg.norm(gzv[:, :, 0], axis=1)
        done += b
    return out


def chi_convergence_check(n_e: int, norm_v: float, n_trials: int, rng, *,
                          n_a: int = 10, n_b: int = 9, direction: str = "random",
                          significance: float = SIGNIFICANCE,
                          mean_tolerance: float = 0.02) -> ChiCheckReport:
    """Compare ``(sqrt 2 / ||v||) ||G Z v||`` against chi with ``2 n_e`` degrees of freedom."""
    if n_trials < 10_000:
        raise ValueError("chi check needs at least 1e4 trials")
    gen, seed = _as_rng(rng)
    norms = sample_interference(n_a, n_b, n_e, norm_v, n_trials, gen, direction)
    scaled = math.sqrt(2) / norm_v * norms
    energy = scaled**2
    dof = 2 * n_e
    mean = float(np.mean(energy))
    ks = stats.kstest(scaled, stats.chi(dof).cdf)
    rel = abs(mean - dof) / dof
    return ChiCheckReport(
        n_e=n_e, norm_v=norm_v, n_trials=n_trials, direction=direction,
        mean_scaled_energy=mean, expected_mean=float(dof), mean_rel_error=rel,
        var_scaled_energy=float(np.var(energy, ddof=1)), expected_var=float(2 * dof),
        ks_statistic=float(ks.statistic), ks_pvalue=float(ks.pvalue),
        significance=significance,
        moment_passed=rel <= mean_tolerance, ks_passed=float(ks.pvalue) > significance,
        seed=seed,
    )


@dataclass(frozen=True)
class LogdetCheckReport:
    n_a: int
    n_b: int
    n_trials: int
    raw_log_det_mean: float
    sample_mean: float
    sample_var: float
    exact_mean: float
    exact_var: float
    normality_statistic: float
    normality_pvalue: float
    mean_window: tuple[float, float]
    var_window: tuple[float, float]
    mean_passed: bool
    var_passed: bool
    informational: bool
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.mean_passed and self.var_passed

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def logdet_standardize(log_det_r, n_a: int, n_b: int):
    """``(log|det R_H| - 1/2 log(n_a!/(n_a-n_b)!) + 1/4 log n_b) / (1/2 sqrt(log n_b))``."""
    centre = 0.5 * (_lfact(n_a) - _lfact(n_a - n_b)) - 0.25 * math.log(n_b)
    scale = 0.5 * math.sqrt(math.log(n_b)) if n_b > 1 else float("nan")
    return (np.asarray(log_det_r) - centre) / scale


def logdet_exact_moments(n_a: int, n_b: int) -> tuple[float, float]:
    """Exact mean and variance of the standardised statistic for CN(0, 1) ``H``.

    ``|R_ii|^2`` are independent Gamma(n_a - i + 1, 1), so ``log|det R|``
    has mean ``sum psi(k) / 2`` and variance ``sum psi'(k) / 4``.
    """
    k = np.arange(n_a - n_b + 1, n_a + 1)
    m = 0.5 * float(np.sum(digamma(k)))
    v = 0.25 * float(np.sum(polygamma(1, k)))
    centre = 0.5 * (_lfact(n_a) - _lfact(n_a - n_b)) - 0.25 * math.log(n_b)
    if n_b < 2:
        return float("nan"), float("nan")
    scale = 0.5 * math.sqrt(math.log(n_b))
    return (m - centre) / scale, v / scale**2


def sample_log_det_r(n_a: int, n_b: int, n_trials: int, rng) -> np.ndarray:
    out = np.empty(n_trials)
    for t in range(n_trials):
        H = (rng.standard_normal((n_b, n_a)) + 1j * rng.standard_normal((n_b, n_a))) / math.sqrt(2)
        _, R = qr_decompose(H.conj().T)
        out[t] = float(np.sum(np.log(np.diagonal(R).real)))
    return out


def logdet_clt_check(n_a: int, n_b: int, n_trials: int, rng, *,
                     mean_window: tuple[float, float] = (-0.1, 0.1),
                     var_window: tuple[float, float] = (0.7, 1.3)) -> LogdetCheckReport:
    """Monte Carlo of the standardised ``log|det R_H|`` statistic.

    For ``n_b < 2`` the statistic is undefined (zero scale) and the report is
    flagged informational.
    """
    if n_trials < 10_000:
        raise ValueError("log-det check needs at least 1e4 trials")
    if not 1 <= n_b < n_a:
        raise DimensionError(f"need 1 <= n_b < n_a, got ({n_a}, {n_b})")
    gen, seed = _as_rng(rng)
    logs = sample_log_det_r(n_a, n_b, n_trials, gen)
    z = logdet_standardize(logs, n_a, n_b)
    informational = n_b < 2
    if informational:
        mean = var = stat = pval = float("nan")
    else:
        mean = float(np.mean(z))
        var = float(np.var(z, ddof=1))
        nt = stats.normaltest(z)
        stat, pval = float(nt.statistic), float(nt.pvalue)
    em, ev = logdet_exact_moments(n_a, n_b)
    return LogdetCheckReport(
        n_a=n_a, n_b=n_b, n_trials=n_trials,
        raw_log_det_mean=float(np.mean(logs)), sample_mean=mean, sample_var=var, exact_mean=em, exact_var=ev,
        normality_statistic=stat, normality_pvalue=pval,
        mean_window=tuple(mean_window), var_window=tuple(var_window),
        mean_passed=bool(mean_window[0] <= mean <= mean_window[1]),
        var_passed=bool(var_window[0] <= var <= var_window[1]),
        informational=informational, seed=seed,
    )
