"""Dense complex linear algebra used by the lattice, precoding and secrecy code.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``;
:func:`as_matrix` / :func:`as_vector` validate shape and finiteness at the
boundaries.  Every function here is pure.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, FactorizationError, RankDeficiencyError

TAU_ORTH = 1e-10
TAU_NULL = 1e-10
TAU_RANK = 1e-8


def as_matrix(a, dtype=complex) -> np.ndarray:
    m = np.asarray(a, dtype=dtype)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(a, dtype=complex) -> np.ndarray:
    v = np.asarray(a, dtype=dtype)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def hermitian(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def svd_decompose(H) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``H = U @ diag(S) @ V^H``.

    Returns ``(U, S, V)`` with ``U`` (m x m) and ``V`` (n x n) unitary and
    ``S`` the ``min(m, n)`` singular values in non-increasing order.  Note
    that ``V`` itself is returned, not ``V^H``.
    """
    H = as_matrix(H)
    try:
        U, S, Vh = np.linalg.svd(H, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge: {exc}") from exc
    return U, S, hermitian(Vh)


def _check_full_rank(S: np.ndarray, what: str) -> None:
    if S.size == 0 or S[-1] <= TAU_RANK * S[0]:
        smin = S[-1] if S.size else 0.0
        raise RankDeficiencyError(
            f"{what} is rank deficient (smallest singular value {smin:.3e})"
        )


def null_space(H) -> np.ndarray:
    """Orthonormal basis ``Z`` of the null space of a wide full-row-rank ``H``.

    ``Z`` holds the trailing ``cols - rows`` right-singular vectors, so it
    matches the ``Z`` block of ``V = [V1, Z]`` from :func:`svd_decompose`.
    """
    H = as_matrix(H)
    rows, cols = H.shape
    if rows >= cols:
        raise DimensionError(f"null space needs rows < cols, got {H.shape}")
    _, S, V = svd_decompose(H)
    _check_full_rank(S, "channel")
    return V[:, rows:]


def pseudoinverse(H) -> np.ndarray:
    """Minimum-norm right inverse ``H^H (H H^H)^{-1}`` of a full-row-rank ``H``."""
    H = as_matrix(H)
    rows, cols = H.shape
    if rows > cols:
        raise DimensionError(f"right inverse needs rows <= cols, got {H.shape}")
    U, S, V = svd_decompose(H)
    _check_full_rank(S, "matrix")
    # V1 diag(1/S) U^H, which equals H^H (H H^H)^{-1} without forming the Gram matrix
    return (V[:, :rows] / S) @ hermitian(U)


def qr_decompose(A) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR with a non-negative real diagonal on ``R``."""
    A = as_matrix(A)
    rows, cols = A.shape
    if rows < cols:
        raise RankDeficiencyError(f"{A.shape} matrix cannot have full column rank")
    Q, R = np.linalg.qr(A, mode="reduced")
    d = np.diagonal(R)
    mag = np.abs(d)
    scale = float(np.linalg.norm(A))
    if cols and (scale == 0.0 or np.min(mag) <= TAU_RANK * scale):
        raise RankDeficiencyError("matrix does not have full column rank")
    phase = d / mag
    Q = Q * phase
    R = R * phase.conj()[:, None]
    # the rotated diagonal is real up to rounding; make it exactly so
    R[np.diag_indices(cols)] = mag
    return Q, R


def abs_det(A) -> float:
    """``|det A|`` via LU; exactly 0 for singular input."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"determinant of non-square {A.shape} matrix")
    sign, logabs = np.linalg.slogdet(A)
    if sign == 0:
        return 0.0
    return float(np.exp(logabs))


def log_abs_det(A) -> float:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"determinant of non-square {A.shape} matrix")
    sign, logabs = np.linalg.slogdet(A)
    return float(logabs) if sign != 0 else -np.inf


def real_embedding(B) -> np.ndarray:
    """Map an m x n complex matrix to its 2m x 2n real form.

    Entry ``a + bi`` becomes the block ``[[a, -b], [b, a]]``, so that
    ``real_embedding(B) @ vec_real(c) == vec_real(B @ c)``.
    """
    B = np.asarray(B, dtype=complex)
    if B.ndim == 1:
        return vec_real(B)
    m, n = B.shape
    out = np.empty((2 * m, 2 * n))
    out[0::2, 0::2] = B.real
    out[0::2, 1::2] = -B.imag
    out[1::2, 0::2] = B.imag
    out[1::2, 1::2] = B.real
    return out


def vec_real(z) -> np.ndarray:
    """Interleave ``(Re z1, Im z1, Re z2, Im z2, ...)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.shape[0])
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def vec_complex(x) -> np.ndarray:
    """Inverse of :func:`vec_real`."""
    x = np.asarray(x)
    if x.shape[0] % 2:
        raise DimensionError("real vector length must be even")
    return x[0::2] + 1j * x[1::2]
