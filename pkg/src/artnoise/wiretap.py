"""MIMO wiretap link: sampling, SVD / lattice precoding with null-space
artificial noise, and the legitimate and eavesdropper receivers.

Alice (``n_a`` antennas) sends ``x = P u + Z v`` where ``Z`` spans the null
space of Bob's channel ``H`` (``n_b x n_a``), so ``v`` reaches only Eve
through ``G`` (``n_e x n_a``).  Secret symbols are square M-QAM with odd
integer coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, RankDeficiencyError
from .lattice import LatticeBasis, babai_nearest_plane, box_sphere_decode, cvp_sphere_decode
from .matcore import as_matrix, as_vector, null_space, pseudoinverse, svd_decompose

PRECODERS = ("svd", "lattice")


@dataclass(frozen=True)
class Constellation:
    """Square M-QAM with per-dimension alphabet ``{-sqrt(M)+1, ..., sqrt(M)-1}``."""

    M: int

    def __post_init__(self):
        side = math.isqrt(self.M)
        if self.M < 4 or side * side != self.M:
            raise ConfigError(f"M must be a perfect square >= 4, got {self.M}")
        if side % 2:
            raise ConfigError(f"sqrt(M) must be even for odd-integer QAM, got M={self.M}")

    @property
    def side(self) -> int:
        return math.isqrt(self.M)

    @property
    def points_per_dim(self) -> np.ndarray:
        return np.arange(-self.side + 1, self.side, 2)

    @property
    def A(self) -> int:
        """Perturbation period ``2 sqrt(M)``."""
        return 2 * self.side

    @property
    def bits_per_symbol(self) -> float:
        return math.log2(self.M)

    def quantize(self, z) -> np.ndarray:
        """Nearest constellation point per real dimension."""
        z = np.asarray(z, dtype=complex)
        return self._q_real(z.real) + 1j * self._q_real(z.imag)

    def _q_real(self, r: np.ndarray) -> np.ndarray:
        q = 2 * np.floor(r / 2) + 1
        return np.clip(q, -self.side + 1, self.side - 1)

    def mod_a(self, s) -> np.ndarray:
        """Map odd-integer coordinates to the congruent point in the window."""
        s = np.asarray(s, dtype=complex)
        h = self.side - 1
        return (np.mod(s.real + h, self.A) - h) + 1j * (np.mod(s.imag + h, self.A) - h)


def quantize_odd(z) -> np.ndarray:
    """Nearest odd integer in each real dimension (no clipping)."""
    z = np.asarray(z, dtype=complex)
    return (2 * np.floor(z.real / 2) + 1) + 1j * (2 * np.floor(z.imag / 2) + 1)


@dataclass(frozen=True)
class WiretapScenario:
    n_a: int
    n_b: int
    n_e: int
    M: int = 64
    sigma_b2: float = 0.0
    sigma_e2: float = 0.0
    beta: float = 1.0
    precoder: str = "lattice"
    total_power_budget: float | None = None

    def __post_init__(self):
        for name in ("n_a", "n_b", "n_e"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.n_b < self.n_a:
            raise ConfigError(f"need n_b < n_a for a non-trivial null space, got {self.n_b}, {self.n_a}")
        Constellation(self.M)
        if self.sigma_b2 < 0 or self.sigma_e2 < 0:
            raise ConfigError("noise variances must be non-negative")
        if not self.beta > 0:
            raise ConfigError("beta must be positive")
        if self.precoder not in PRECODERS + ("both",):
            raise ConfigError(f"unknown precoder {self.precoder!r}")

    @property
    def constellation(self) -> Constellation:
        return Constellation(self.M)

    @property
    def precoders(self) -> tuple[str, ...]:
        return PRECODERS if self.precoder == "both" else (self.precoder,)


@dataclass(frozen=True)
class TransmitRecord:
    """One precoded transmission.

    ``s`` is the effective data point seen through ``H``: ``u`` for SVD
    precoding, ``u - A w_hat`` for lattice precoding.  ``precoding_matrix``
    is ``V1`` (SVD) or ``H^+`` (lattice).
    """

    precoder: str
    u: np.ndarray
    v: np.ndarray
    w_hat: np.ndarray | None
    s: np.ndarray
    x: np.ndarray
    precoding_matrix: np.ndarray
    null_basis: np.ndarray
    data_power: float
    noise_power: float

    @property
    def total_power(self) -> float:
        return float(np.vdot(self.x, self.x).real)

    def power_identity_gap(self) -> float:
        """Relative violation of ``||x||^2 = data_power + noise_power``."""
        total = self.total_power
        expected = self.data_power + self.noise_power
        return abs(total - expected) / max(expected, 1e-300)


def _cn(rng, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def sample_channel(rows: int, cols: int, rng) -> np.ndarray:
    """I.i.d. CN(0, 1) entries."""
    if rows < 1 or cols < 1:
        raise DimensionError("channel dimensions must be positive")
    return _cn(rng, (rows, cols))


def sample_secret(c: Constellation, n_b: int, rng) -> np.ndarray:
    pts = c.points_per_dim
    idx = rng.integers(0, c.side, size=(2, n_b))
    return pts[idx[0]] + 1j * pts[idx[1]]


def sample_artificial_noise(dim: int, target_norm: float, rng) -> np.ndarray:
    """Continuous random direction (real/imag uniform on [-1, 1]) scaled to ``target_norm``."""
    if dim < 1:
        raise DimensionError("artificial noise needs dimension >= 1")
    if not target_norm > 0:
        raise ValueError("target_norm must be positive")
    while True:
        v = rng.uniform(-1.0, 1.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
        n = np.linalg.norm(v)
        if n > 0:
            return v * (target_norm / n)


def _check_dims(H, u, v):
    H = as_matrix(H)
    u = as_vector(u)
    v = as_vector(v)
    n_b, n_a = H.shape
    if u.shape[0] != n_b or v.shape[0] != n_a - n_b:
        raise DimensionError(
            f"u has {u.shape[0]} entries (need {n_b}), v has {v.shape[0]} (need {n_a - n_b})"
        )
    return H, u, v


def svd_precode(H, u, v) -> TransmitRecord:
    """``x = V1 u + Z v`` from ``H = U diag(S) V^H``, ``V = [V1, Z]``."""
    H, u, v = _check_dims(H, u, v)
    n_b = H.shape[0]
    Z = null_space(H)  # also enforces full row rank
    _, _, V = svd_decompose(H)
    V1 = V[:, :n_b]
    x = V1 @ u + Z @ v
    return TransmitRecord(
        precoder="svd", u=u, v=v, w_hat=None, s=u, x=x,
        precoding_matrix=V1, null_basis=Z,
        data_power=float(np.vdot(u, u).real), noise_power=float(np.vdot(v, v).real),
    )


def lattice_precode(H, u, v, c: Constellation, mode: str = "exact") -> TransmitRecord:
    """Vector-perturbation precoding ``x = H^+ (u - A w_hat) + Z v``.

    ``w_hat`` minimises ``||H^+ (u - A w)||`` over Gaussian integers: exactly
    by sphere decoding (``mode="exact"``) or by LLL-aided Babai rounding
    (``mode="babai"``), falling back to ``w = 0`` when rounding would raise
    the transmit power.
    """
    H, u, v = _check_dims(H, u, v)
    Hd = pseudoinverse(H)
    Z = null_space(H)
    L = LatticeBasis(c.A * Hd)
    target = Hd @ u
    if mode == "exact":
        res = cvp_sphere_decode(L, target)
    elif mode == "babai":
        res = babai_nearest_plane(L, target)
    else:
        raise ValueError(f"unknown lattice precoding mode {mode!r}")
    w_hat = np.asarray(res.coefficients, dtype=complex)
    if mode == "babai" and res.distance > np.linalg.norm(target):
        # Babai can overshoot; never do worse than no perturbation
        w_hat = np.zeros_like(w_hat)
    s = u - c.A * w_hat
    data = Hd @ s
    x = data + Z @ v
    return TransmitRecord(
        precoder="lattice", u=u, v=v, w_hat=w_hat, s=s, x=x,
        precoding_matrix=Hd, null_basis=Z,
        data_power=float(np.vdot(data, data).real), noise_power=float(np.vdot(v, v).real),
    )


def precode(precoder: str, H, u, v, c: Constellation, lp_mode: str = "exact") -> TransmitRecord:
    if precoder == "svd":
        return svd_precode(H, u, v)
    if precoder == "lattice":
        return lattice_precode(H, u, v, c, lp_mode)
    raise ValueError(f"unknown precoder {precoder!r}")


def transmit_through(channel, x, sigma2: float, rng) -> np.ndarray:
    """``channel @ x + n`` with ``n ~ CN(0, sigma2 I)``.

    The unit noise draw happens even for ``sigma2 == 0`` so that a given
    generator state yields the same noise direction at every variance.
    """
    channel = as_matrix(channel)
    x = as_vector(x)
    if channel.shape[1] != x.shape[0]:
        raise DimensionError(f"channel {channel.shape} cannot act on length-{x.shape[0]} signal")
    if sigma2 < 0:
        raise ValueError("noise variance must be non-negative")
    n = _cn(rng, channel.shape[0])
    return channel @ x + math.sqrt(sigma2) * n


def bob_decode_svd(z, H, c: Constellation) -> np.ndarray:
    """Equalise with ``diag(S)^-1 U^H`` and slice to the constellation."""
    H = as_matrix(H)
    n_b = H.shape[0]
    U, S, _ = svd_decompose(H)
    if S[-1] <= 1e-8 * S[0]:
        raise RankDeficiencyError("Bob's channel is rank deficient")
    eq = (U[:, :n_b].conj().T @ as_vector(z)) / S
    return c.quantize(eq)


def bob_decode_lp(z, c: Constellation) -> np.ndarray:
    """Slice to the odd-integer grid, then fold modulo ``A`` into the window."""
    return c.mod_a(quantize_odd(as_vector(z)))


def eve_decode_svd(y, G, P, c: Constellation) -> np.ndarray:
    """Exact ML estimate of ``u`` from ``y = G P u + noise`` over the finite alphabet.

    Writing ``u = 2 k - (sqrt(M) - 1)(1 + i)`` turns it into a box-constrained
    closest-point search on the lattice ``2 G P``.
    """
    GP = as_matrix(G) @ as_matrix(P)
    h = c.side - 1
    offset = h * (1 + 1j) * GP.sum(axis=1)
    L = LatticeBasis(2 * GP)
    n = L.dim
    res = box_sphere_decode(L, as_vector(y) + offset, np.zeros(n), np.full(n, c.side - 1))
    k = np.asarray(res.coefficients)
    return 2 * k - h * (1 + 1j)


def eve_decode_lp(y, G, H, c: Constellation) -> np.ndarray:
    """Exact ML estimate of ``u`` under lattice precoding.

    ``s = u - A w_hat`` is an arbitrary odd Gaussian-integer vector, i.e.
    ``s = 2 k + (1 + i)``; Eve solves an unconstrained closest-point problem
    on ``2 G H^+`` and folds the result modulo ``A``.
    """
    B = as_matrix(G) @ pseudoinverse(H)
    offset = (1 + 1j) * B.sum(axis=1)
    L = LatticeBasis(2 * B)
    res = cvp_sphere_decode(L, as_vector(y) - offset)
    s = 2 * np.asarray(res.coefficients) + (1 + 1j)
    return c.mod_a(s)


def eve_decode(record: TransmitRecord, y, G, H, c: Constellation) -> np.ndarray:
    if record.precoder == "svd":
        return eve_decode_svd(y, G, record.precoding_matrix, c)
    return eve_decode_lp(y, G, H, c)


def bob_decode(record: TransmitRecord, z, H, c: Constellation) -> np.ndarray:
    if record.precoder == "svd":
        return bob_decode_svd(z, H, c)
    return bob_decode_lp(z, c)
