from __future__ import annotations

import math

import numpy as np
from scipy.spatial import Delaunay

from ..errors import DimensionError
from .basis import LatticeBasis
from .decoding import svp_shortest
from .reduction import lll_real


def unit_ball_log_volume(n: int) -> float:
    return 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1)


def effective_radius(L: LatticeBasis, mode: str = "asymptotic") -> float:
    """Radius of a ball whose volume equals the lattice volume.

    ``"asymptotic"`` uses ``sqrt(n / (2 pi e)) * vol^(1/n)``, ``n`` the real
    dimension; for a square complex basis this is
    ``sqrt(N / (pi e)) * |det B|^(1/N)``.  ``"exact_ball"`` inverts the
    unit-ball volume exactly.
    """
    n = L.dim
    if mode == "asymptotic":
        return math.sqrt(n / (2 * math.pi * math.e)) * math.exp(L.log_volume / n)
    if mode == "exact_ball":
        return math.exp((L.log_volume - unit_ball_log_volume(n)) / n)
    raise ValueError(f"unknown effective-radius mode {mode!r}")


def dual_basis(L: LatticeBasis) -> LatticeBasis:
    """Basis ``(B^+)^H`` of the dual lattice inside the span of ``B``."""
    B = L.basis
    return LatticeBasis(np.linalg.pinv(B).conj().T)


def covering_radius_upper_bound(L: LatticeBasis) -> float:
    """Transference bound ``(n/2) / lambda_1(dual)``, ``n`` the real dimension.

    For a complex basis with ``N`` columns the numerator is ``N``.
    """
    _, lam = svp_shortest(dual_basis(L))
    return (L.dim / 2) / lam


def covering_radius_exact_2d(L: LatticeBasis) -> float:
    """Exact covering radius of a rank-2 real lattice.

    Deep holes are circumcenters of Delaunay triangles; with a Gauss-reduced
    basis, triangles touching the origin cover every class.
    """
    if L.dim != 2:
        raise DimensionError(f"need a rank-2 lattice, got real dimension {L.dim}")
    B, _ = lll_real(L.real_basis, 0.99)
    # work in the 2-D span
    Q, R = np.linalg.qr(B)
    rng = np.arange(-3, 4)
    cx, cy = np.meshgrid(rng, rng, indexing="ij")
    coeffs = np.stack([cx.ravel(), cy.ravel()])
    pts = (R @ coeffs).T
    tri = Delaunay(pts)
    origin = int(np.flatnonzero((coeffs[0] == 0) & (coeffs[1] == 0))[0])
    best = 0.0
    for simplex in tri.simplices:
        if origin not in simplex:
            continue
        a, b, c = pts[simplex]
        best = max(best, _circumradius(a, b, c))
    return best


def _circumradius(a, b, c) -> float:
    ab = np.linalg.norm(b - a)
    bc = np.linalg.norm(c - b)
    ca = np.linalg.norm(a - c)
    area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    return float(ab * bc * ca / (2 * area2))
