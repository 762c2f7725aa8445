"""Closest- and shortest-vector search.

All searches run on the real embedding.  Exact searches use depth-first
Schnorr-Euchner enumeration with radius shrinking on an LLL-reduced basis;
``babai_nearest_plane`` is the one-shot greedy descent of the same tree.
"""
from __future__ import annotations

import numpy as np

from ..errors import CapacityError, DimensionError, NotFoundError
from ._kernels import UNBOUNDED, enum_kernel
from .basis import CvpResult, LatticeBasis

CVP_DIM_CAP = 40
SVP_DIM_CAP = 24


def _positive_qr(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Q, R = np.linalg.qr(B)
    s = np.sign(np.diagonal(R))
    s[s == 0] = 1.0
    return Q * s, R * s[:, None]


def _tie_tol(scale2: float) -> float:
    return 1e-9 * max(1.0, scale2)


def _finish(L: LatticeBasis, target, t_real: np.ndarray, x_real: np.ndarray, nodes: int) -> CvpResult:
    coeffs = L.coeffs_from_real(x_real)
    point = L.point(coeffs)
    distance = float(np.linalg.norm(t_real - L.real_basis @ x_real))
    return CvpResult(coefficients=coeffs, point=point, distance=distance, nodes=int(nodes))


def babai_nearest_plane(L: LatticeBasis, target, *, reduce: bool = True) -> CvpResult:
    """Babai's nearest-plane approximation to the closest lattice point.

    With ``reduce`` (the default) the search runs on the LLL-reduced basis,
    which is what gives the ``2^(n/2)`` approximation guarantee.
    """
    t = L.to_real(target)
    if reduce:
        Bw, U = L.reduced
    else:
        Bw, U = L.real_basis, np.eye(L.dim, dtype=np.int64)
    Q, R = _positive_qr(Bw)
    y = Q.T @ t
    n = R.shape[0]
    z = np.zeros(n)
    for k in range(n - 1, -1, -1):
        c = (y[k] - R[k, k + 1:] @ z[k + 1:]) / R[k, k]
        z[k] = np.floor(c + 0.5)
    x = U @ z.astype(np.int64)
    return _finish(L, target, t, x, n)


def cvp_sphere_decode(L: LatticeBasis, target, radius_hint: float | None = None,
                      *, reduce: bool = True, max_dim: int = CVP_DIM_CAP) -> CvpResult:
    """Exact closest lattice point to ``target``.

    Ties (equal distance within 1e-9 relative) go to the lexicographically
    smallest coefficient vector.  If ``radius_hint`` is given the search is
    confined to that ball and :class:`NotFoundError` is raised when it holds
    no lattice point.
    """
    if L.dim > max_dim:
        raise CapacityError(f"real dimension {L.dim} exceeds CVP enumeration cap {max_dim}")
    t = L.to_real(target)
    if reduce:
        Bw, U = L.reduced
    else:
        Bw, U = L.real_basis, np.eye(L.dim, dtype=np.int64)
    Q, R = _positive_qr(Bw)
    y = Q.T @ t
    outside2 = float(np.sum((t - Q @ y) ** 2))
    if radius_hint is None:
        radius2 = np.inf
    else:
        if radius_hint < 0:
            raise ValueError("radius_hint must be non-negative")
        radius2 = radius_hint**2 - outside2
        if radius2 < 0:
            raise NotFoundError(f"no lattice point within radius {radius_hint}")
    n = L.dim
    lo = np.full(n, -UNBOUNDED, dtype=np.int64)
    hi = np.full(n, UNBOUNDED, dtype=np.int64)
    tol = _tie_tol(float(y @ y) + float(np.sum(np.diagonal(R) ** 2)))
    found, x, _, nodes = enum_kernel(R, y, lo, hi, float(radius2), tol,
                                     np.ascontiguousarray(U), False)
    if not found:
        raise NotFoundError(f"no lattice point within radius {radius_hint}")
    return _finish(L, target, t, U @ x, nodes)


def box_sphere_decode(L: LatticeBasis, target, lo, hi, *, max_dim: int = CVP_DIM_CAP) -> CvpResult:
    """Exact closest point over the finite set ``{B x : lo <= x <= hi}``.

    ``lo`` / ``hi`` bound the real (interleaved) coefficients.  No basis
    reduction is possible here since it would not preserve the box.
    """
    if L.dim > max_dim:
        raise CapacityError(f"real dimension {L.dim} exceeds CVP enumeration cap {max_dim}")
    t = L.to_real(target)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    if lo.shape != (L.dim,) or hi.shape != (L.dim,):
        raise DimensionError("box bounds must have one entry per real coefficient")
    if np.any(lo > hi):
        raise ValueError("empty coefficient box")
    Q, R = _positive_qr(L.real_basis)
    y = Q.T @ t
    tol = _tie_tol(float(y @ y) + float(np.sum(np.diagonal(R) ** 2)))
    found, x, _, nodes = enum_kernel(R, y, lo, hi, np.inf, tol,
                                     np.eye(L.dim, dtype=np.int64), False)
    assert found
    return _finish(L, target, t, x, nodes)


def svp_shortest(L: LatticeBasis, *, max_dim: int = SVP_DIM_CAP) -> tuple[np.ndarray, float]:
    """A shortest nonzero vector of the lattice and its length ``lambda_1``."""
    if L.dim > max_dim:
        raise CapacityError(f"real dimension {L.dim} exceeds SVP enumeration cap {max_dim}")
    Bw, U = L.reduced
    Q, R = _positive_qr(Bw)
    n = L.dim
    first2 = float(np.min(np.sum(Bw**2, axis=0)))
    lo = np.full(n, -UNBOUNDED, dtype=np.int64)
    hi = np.full(n, UNBOUNDED, dtype=np.int64)
    tol = _tie_tol(first2)
    found, x, _, _ = enum_kernel(R, np.zeros(n), lo, hi, first2 * (1 + 1e-9), tol,
                                 np.ascontiguousarray(U), True)
    assert found
    coeffs = L.coeffs_from_real(U @ x)
    vec = L.point(coeffs)
    return vec, float(np.linalg.norm(L.real_basis @ (U @ x)))
