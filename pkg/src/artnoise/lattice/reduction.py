from __future__ import annotations

import numpy as np

from ._kernels import lll_kernel
from .basis import LatticeBasis

# slack when re-checking the conditions on the floating-point output
_CHECK_TOL = 1e-9


def gram_schmidt(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(mu, norms2)`` of the columns of a real basis, via QR."""
    _, R = np.linalg.qr(B)
    d = np.diagonal(R)
    mu = (R / d[:, None]).T
    return mu, d**2


def is_lll_reduced(B: np.ndarray, delta: float = 0.75, tol: float = _CHECK_TOL) -> bool:
    n = B.shape[1]
    if n <= 1:
        return True
    mu, bn = gram_schmidt(B)
    low = np.tril(mu, -1)
    if np.any(np.abs(low) > 0.5 + tol):
        return False
    for k in range(1, n):
        if bn[k] < (delta - mu[k, k - 1] ** 2 - tol) * bn[k - 1]:
            return False
    return True


def lll_real(B: np.ndarray, delta: float = 0.75) -> tuple[np.ndarray, np.ndarray]:
    B = np.ascontiguousarray(B, dtype=float)
    if B.shape[1] <= 1:
        return B.copy(), np.eye(B.shape[1], dtype=np.int64)
    Bred, U = lll_kernel(B, float(delta))
    # incremental Gram-Schmidt drifts on badly scaled input; a fresh pass fixes it
    for _ in range(4):
        if is_lll_reduced(Bred, delta):
            break
        Bred, U2 = lll_kernel(Bred, float(delta))
        U = U @ U2
    # recompute from exact integer transform to drop accumulated rounding
    return B @ U, U


def lll_reduce(L: LatticeBasis, delta: float = 0.75) -> tuple[LatticeBasis, np.ndarray]:
    """LLL reduction of a lattice basis.

    Returns the reduced basis and the unimodular ``U`` with
    ``L_red.basis = L.basis @ U``.  Complex bases are reduced over their
    real embedding; the result is then a real ``LatticeBasis`` of the
    isometric real lattice, and ``U`` acts on interleaved real coordinates.
    """
    if not 0.25 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0.25, 1], got {delta}")
    Bred, U = lll_real(L.real_basis, delta)
    return LatticeBasis(Bred), U
