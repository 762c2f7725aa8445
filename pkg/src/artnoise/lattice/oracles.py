"""Brute-force reference searches for small lattices.

These deliberately share nothing with the enumeration code: they list every
integer vector in an explicit coefficient box and take the minimum.
"""
from __future__ import annotations

import itertools

import numpy as np

from .basis import LatticeBasis


def coefficient_box(B: np.ndarray, target: np.ndarray, radius: float) -> list[range]:
    """Integer ranges containing every ``x`` with ``||B x - target|| <= radius``.

    Uses ``x - B^+ t = B^+ (B x - t_par)`` so ``|x_i - c_i| <= radius * ||row_i(B^+)||``.
    """
    Bp = np.linalg.pinv(B)
    c = Bp @ target
    w = radius * np.linalg.norm(Bp, axis=1)
    return [range(int(np.floor(ci - wi)), int(np.ceil(ci + wi)) + 1) for ci, wi in zip(c, w)]


def _all_points(ranges: list[range]) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(r.start, r.stop) for r in ranges], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def cvp_exhaustive(B: np.ndarray, target: np.ndarray, radius: float) -> tuple[np.ndarray, float]:
    """Closest point by listing the box implied by a known upper bound ``radius``."""
    B = np.asarray(B, dtype=float)
    target = np.asarray(target, dtype=float)
    X = _all_points(coefficient_box(B, target, radius * (1 + 1e-9) + 1e-12))
    d = np.linalg.norm(X @ B.T - target, axis=1)
    i = int(np.argmin(d))
    return X[i], float(d[i])


def svp_exhaustive(B: np.ndarray, box: int) -> float:
    """Shortest nonzero norm over coefficients in ``[-box, box]^n``."""
    B = np.asarray(B, dtype=float)
    n = B.shape[1]
    best = np.inf
    r = np.arange(-box, box + 1)
    for head in itertools.product(r, repeat=max(n - 4, 0)):
        tail = _all_points([range(-box, box + 1)] * min(n, 4))
        X = np.hstack([np.tile(np.array(head, dtype=np.int64), (tail.shape[0], 1)), tail])
        X = X[np.any(X != 0, axis=1)]
        if X.size:
            best = min(best, float(np.min(np.linalg.norm(X @ B.T, axis=1))))
    return best


def sampled_deep_hole(L: LatticeBasis, n_samples: int, rng) -> float:
    """Lower bound on the covering radius: max CVP distance over random targets.

    Targets are uniform in the fundamental parallelepiped; distances come
    from the exact sphere decoder.
    """
    from .decoding import cvp_sphere_decode

    B = L.real_basis
    best = 0.0
    for _ in range(n_samples):
        t = B @ rng.random(L.dim)
        if L.is_complex:
            from ..matcore import vec_complex

            t = vec_complex(t)
        best = max(best, cvp_sphere_decode(L, t).distance)
    return best
