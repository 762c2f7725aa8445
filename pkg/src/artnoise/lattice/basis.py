from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import DimensionError, RankDeficiencyError
from ..matcore import TAU_RANK, as_matrix, real_embedding, vec_complex, vec_real


class LatticeBasis:
    """Full-column-rank lattice basis, complex (over Z[i]) or real (over Z).

    A complex basis is handled through its real embedding; the cached
    ``volume`` is the volume of that real lattice, ``sqrt(det(B_R^T B_R))``.
    Instances are immutable and cache their derived data, so they can be
    handed to worker processes freely.
    """

    def __init__(self, basis):
        arr = np.asarray(basis)
        self.is_complex = bool(np.iscomplexobj(arr))
        arr = as_matrix(arr, dtype=complex if self.is_complex else float)
        arr = arr.copy()
        arr.setflags(write=False)
        self.basis = arr
        rb = real_embedding(arr) if self.is_complex else arr
        rb = np.ascontiguousarray(rb)
        rb.setflags(write=False)
        self.real_basis = rb
        m, n = rb.shape
        if n == 0 or m < n:
            raise RankDeficiencyError(f"basis of shape {arr.shape} is not full column rank")
        s = np.linalg.svd(rb, compute_uv=False)
        if s[-1] <= TAU_RANK * s[0]:
            raise RankDeficiencyError(
                f"basis is rank deficient (singular values {s[0]:.3e} .. {s[-1]:.3e})"
            )
        self.log_volume = float(np.sum(np.log(s)))

    @property
    def dim(self) -> int:
        """Dimension of the real lattice."""
        return self.real_basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.real_basis.shape[0]

    @property
    def volume(self) -> float:
        return float(np.exp(self.log_volume))

    @property
    def is_square(self) -> bool:
        return self.basis.shape[0] == self.basis.shape[1]

    def to_real(self, target) -> np.ndarray:
        t = np.asarray(target)
        if self.is_complex:
            t = vec_real(np.asarray(t, dtype=complex))
        else:
            if np.iscomplexobj(t):
                raise DimensionError("complex target for a real lattice")
            t = np.asarray(t, dtype=float)
        if t.shape != (self.ambient_dim,):
            raise DimensionError(
                f"target has {t.shape[0]} real components, lattice lives in {self.ambient_dim}"
            )
        return t

    def coeffs_from_real(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return vec_complex(x) if self.is_complex else x

    def point(self, coeffs) -> np.ndarray:
        return self.basis @ np.asarray(coeffs)

    @cached_property
    def reduced(self) -> tuple[np.ndarray, np.ndarray]:
        """LLL-reduced real basis and its unimodular transform (delta 0.75)."""
        from .reduction import lll_real

        return lll_real(self.real_basis, 0.75)

    def __repr__(self) -> str:
        kind = "complex" if self.is_complex else "real"
        return f"LatticeBasis({kind}, shape={self.basis.shape}, volume={self.volume:.6g})"


@dataclass(frozen=True)
class CvpResult:
    coefficients: np.ndarray
    point: np.ndarray
    distance: float
    nodes: int = 0
