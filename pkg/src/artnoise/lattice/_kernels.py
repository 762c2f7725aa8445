"""Compiled inner loops: floating-point LLL and Schnorr-Euchner enumeration."""
from __future__ import annotations

import numpy as np
from numba import njit

UNBOUNDED = np.int64(1) << np.int64(60)


@njit(cache=True)
def _round(x):
    return np.floor(x + 0.5)


@njit(cache=True)
def _size_reduce(b, T, mu, k, l):
    if abs(mu[k, l]) > 0.5:
        q = _round(mu[k, l])
        qi = np.int64(q)
        b[k, :] -= q * b[l, :]
        T[k, :] -= qi * T[l, :]
        mu[k, l] -= q
        for i in range(l):
            mu[k, i] -= q * mu[l, i]


@njit(cache=True)
def lll_kernel(B, delta):
    """LLL-reduce the columns of ``B``.

    Returns ``(B_red, U)`` with ``B_red = B @ U``.  Gram-Schmidt data is
    updated incrementally on swaps, so the caller re-checks the result.
    """
    m, n = B.shape
    b = np.ascontiguousarray(B.T).copy()
    T = np.eye(n, dtype=np.int64)
    mu = np.zeros((n, n))
    Bn = np.zeros(n)
    bstar = np.zeros((n, m))
    for i in range(n):
        v = b[i, :].copy()
        for j in range(i):
            mu[i, j] = np.dot(b[i, :], bstar[j, :]) / Bn[j]
            v -= mu[i, j] * bstar[j, :]
        bstar[i, :] = v
        Bn[i] = np.dot(v, v)

    k = 1
    while k < n:
        _size_reduce(b, T, mu, k, k - 1)
        if Bn[k] < (delta - mu[k, k - 1] ** 2) * Bn[k - 1]:
            mu_ = mu[k, k - 1]
            Bt = Bn[k] + mu_ * mu_ * Bn[k - 1]
            mu[k, k - 1] = mu_ * Bn[k - 1] / Bt
            Bn[k] = Bn[k - 1] * Bn[k] / Bt
            Bn[k - 1] = Bt
            for c in range(m):
                tmp = b[k, c]
                b[k, c] = b[k - 1, c]
                b[k - 1, c] = tmp
            for c in range(n):
                ti = T[k, c]
                T[k, c] = T[k - 1, c]
                T[k - 1, c] = ti
            for j in range(k - 1):
                tmp = mu[k, j]
                mu[k, j] = mu[k - 1, j]
                mu[k - 1, j] = tmp
            for i in range(k + 1, n):
                t = mu[i, k]
                mu[i, k] = mu[i, k - 1] - mu_ * t
                mu[i, k - 1] = t + mu[k, k - 1] * mu[i, k]
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                _size_reduce(b, T, mu, k, l)
            k += 1
    return b.T.copy(), T.T.copy()


@njit(cache=True)
def _matvec_int(T, x):
    n = T.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        acc = np.int64(0)
        for j in range(T.shape[1]):
            acc += T[i, j] * x[j]
        out[i] = acc
    return out


@njit(cache=True)
def _lex_less(a, b):
    for i in range(a.shape[0]):
        if a[i] < b[i]:
            return True
        if a[i] > b[i]:
            return False
    return False


@njit(cache=True)
def enum_kernel(R, y, lo, hi, radius2, tie_tol, T, exclude_zero):
    """Depth-first Schnorr-Euchner search for ``min ||y - R x||^2``.

    ``R`` is upper triangular with positive diagonal, ``x`` is integer with
    ``lo <= x <= hi``.  The radius shrinks on every improvement.  Leaves
    whose distance is within ``tie_tol`` of the incumbent are compared on
    ``T @ x`` lexicographically.  With ``exclude_zero`` the zero vector is
    skipped (shortest-vector mode).

    Returns ``(found, x_best, d2_best, nodes)``.
    """
    n = R.shape[0]
    x = np.zeros(n, dtype=np.int64)
    best = np.zeros(n, dtype=np.int64)
    best_orig = np.zeros(n, dtype=np.int64)
    found = False
    best_d2 = radius2
    dist = np.zeros(n + 1)
    center = np.zeros(n)
    up = np.zeros(n, dtype=np.int64)
    dn = np.zeros(n, dtype=np.int64)
    nodes = 0

    k = n - 1
    center[k] = y[k] / R[k, k]
    r = np.int64(_round(center[k])) if abs(center[k]) < 1e18 else np.int64(0)
    r = min(max(r, lo[k]), hi[k])
    up[k] = r
    dn[k] = r - 1

    while True:
        c = center[k]
        have_up = up[k] <= hi[k]
        have_dn = dn[k] >= lo[k]
        if not have_up and not have_dn:
            k += 1
            if k == n:
                break
            continue
        if have_up and have_dn:
            take_up = abs(up[k] - c) <= abs(c - dn[k])
        else:
            take_up = have_up
        val = up[k] if take_up else dn[k]
        diff = R[k, k] * (c - val)
        d = dist[k + 1] + diff * diff
        if d > best_d2 + tie_tol:
            k += 1
            if k == n:
                break
            continue
        if take_up:
            up[k] += 1
        else:
            dn[k] -= 1
        x[k] = val
        nodes += 1
        if k == 0:
            if exclude_zero:
                allzero = True
                for i in range(n):
                    if x[i] != 0:
                        allzero = False
                        break
                if allzero:
                    continue
            orig = _matvec_int(T, x)
            if not found or d < best_d2 - tie_tol:
                accept = True
            else:
                accept = _lex_less(orig, best_orig)
            if accept:
                found = True
                best[:] = x
                best_orig[:] = orig
                if d < best_d2:
                    best_d2 = d
            continue
        dist[k] = d
        k -= 1
        s = y[k]
        for j in range(k + 1, n):
            s -= R[k, j] * x[j]
        center[k] = s / R[k, k]
        r = np.int64(_round(center[k])) if abs(center[k]) < 1e18 else np.int64(0)
        r = min(max(r, lo[k]), hi[k])
        up[k] = r
        dn[k] = r - 1
    return found, best, best_d2, nodes
