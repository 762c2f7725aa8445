import itertools
import math

import numpy as np
import pytest

from artnoise.errors import CapacityError, DimensionError, NotFoundError, RankDeficiencyError
from artnoise.lattice import (
    LatticeBasis,
    babai_nearest_plane,
    box_sphere_decode,
    covering_radius_exact_2d,
    covering_radius_upper_bound,
    cvp_sphere_decode,
    dual_basis,
    effective_radius,
    is_lll_reduced,
    lll_reduce,
    svp_shortest,
)
from artnoise.lattice.oracles import coefficient_box, cvp_exhaustive, sampled_deep_hole, svp_exhaustive
from artnoise.harness.selftest import gaussian_heuristic_ratio, random_instance


def gs_check(B, delta):
    """Independent Gram-Schmidt (classical, column by column) and LLL conditions."""
    n = B.shape[1]
    Bs = np.zeros_like(B, dtype=float)
    mu = np.zeros((n, n))
    for i in range(n):
        v = B[:, i].astype(float).copy()
        for j in range(i):
            mu[i, j] = B[:, i] @ Bs[:, j] / (Bs[:, j] @ Bs[:, j])
            v -= mu[i, j] * Bs[:, j]
        Bs[:, i] = v
    nb = np.sum(Bs**2, axis=0)
    size = all(abs(mu[i, j]) <= 0.5 + 1e-9 for i in range(n) for j in range(i))
    lovasz = all(nb[k] >= (delta - mu[k, k - 1] ** 2) * nb[k - 1] - 1e-9 * nb[k - 1] for k in range(1, n))
    return size, lovasz


# LatticeBasis


def test_basis_rejects_rank_deficiency():
    with pytest.raises(RankDeficiencyError):
        LatticeBasis(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(RankDeficiencyError):
        LatticeBasis(np.ones((1, 2)))


def test_basis_volume_matches_recomputed(rng):
    B = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    L = LatticeBasis(B)
    Br = L.real_basis
    assert L.volume == pytest.approx(math.sqrt(np.linalg.det(Br.T @ Br)), rel=1e-8)
    S = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert LatticeBasis(S).volume == pytest.approx(abs(np.linalg.det(S)) ** 2, rel=1e-8)


def test_basis_is_immutable(rng):
    L = LatticeBasis(rng.standard_normal((3, 3)))
    with pytest.raises(ValueError):
        L.basis[0, 0] = 1.0


# LLL


def test_lll_orthogonal_basis_unchanged():
    B = np.diag([1.0, 2.0, 3.0])
    Lr, U = lll_reduce(LatticeBasis(B))
    assert np.array_equal(U, np.eye(3, dtype=np.int64))
    assert np.allclose(Lr.basis, B)


def test_lll_basis_of_z2():
    B = np.array([[1.0, 2.0], [1.0, 1.0]])
    Lr, U = lll_reduce(LatticeBasis(B))
    assert abs(round(np.linalg.det(U))) == 1
    assert abs(np.linalg.det(Lr.basis)) == pytest.approx(1.0)
    size, lovasz = gs_check(Lr.basis, 0.75)
    assert size and lovasz
    assert min(np.linalg.norm(Lr.basis, axis=0)) == pytest.approx(1.0)
    assert svp_exhaustive(B, 3) == pytest.approx(1.0)


def test_lll_first_vector_bound_8d(rng):
    for _ in range(20):
        B = rng.standard_normal((8, 8))
        Lr, U = lll_reduce(LatticeBasis(B), 0.75)
        n = 8
        bound = 2 ** ((n - 1) / 4) * abs(np.linalg.det(B)) ** (1 / n)
        assert np.linalg.norm(Lr.basis[:, 0]) <= bound * (1 + 1e-12)


def test_lll_conditions_and_unimodularity_random(rng):
    for _ in range(200):
        n = int(rng.integers(2, 10))
        m = n + int(rng.integers(0, 3))
        B = rng.standard_normal((m, n)) * rng.uniform(0.1, 10.0, n)
        L = LatticeBasis(B)
        for delta in (0.5, 0.75, 0.99):
            Lr, U = lll_reduce(L, delta)
            assert np.array_equal(U, np.round(U))
            assert abs(round(np.linalg.det(U.astype(float)))) == 1
            assert np.allclose(Lr.basis, B @ U)
            assert Lr.volume == pytest.approx(L.volume, rel=1e-8)
            size, lovasz = gs_check(Lr.basis, delta)
            assert size and lovasz
            assert is_lll_reduced(Lr.basis, delta)


def test_lll_complex_basis_acts_on_real_embedding(rng):
    B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    L = LatticeBasis(B)
    Lr, U = lll_reduce(L)
    assert not Lr.is_complex
    assert np.allclose(Lr.basis, L.real_basis @ U)


def test_lll_rejects_bad_delta(rng):
    with pytest.raises(ValueError):
        lll_reduce(LatticeBasis(np.eye(2)), 0.2)


# Babai


def test_babai_rounding_and_lattice_point(rng):
    res = babai_nearest_plane(LatticeBasis(np.eye(2)), np.array([0.3, -0.4]))
    assert np.array_equal(res.point, [0, 0])
    B = rng.standard_normal((4, 4))
    c = np.array([2, -1, 0, 3])
    res = babai_nearest_plane(LatticeBasis(B), B @ c)
    assert res.distance == pytest.approx(0.0, abs=1e-9)
    assert np.array_equal(res.coefficients, c)


def test_babai_ratio_4d(rng):
    B = rng.standard_normal((4, 4))
    L = LatticeBasis(B)
    for _ in range(100):
        t = rng.standard_normal(4) * 3
        exact = cvp_sphere_decode(L, t)
        bab = babai_nearest_plane(L, t)
        assert bab.distance <= 4 * exact.distance + 1e-12


def test_babai_without_reduction_is_plain_nearest_plane():
    # on an orthogonal basis nearest plane is coordinate rounding
    B = np.diag([2.0, 3.0])
    res = babai_nearest_plane(LatticeBasis(B), np.array([2.9, -4.4]), reduce=False)
    assert np.array_equal(res.coefficients, [1, -1])


# exact CVP


def test_cvp_examples():
    res = cvp_sphere_decode(LatticeBasis(np.eye(2)), np.array([0.6, -1.2]))
    assert np.array_equal(res.point, [1, -1])
    assert res.distance == pytest.approx(math.sqrt(0.2))
    B = np.array([[2.0, 1.0], [0.0, 1.0]])
    res = cvp_sphere_decode(LatticeBasis(B), np.array([1.9, 0.4]))
    # oracle: exhaustive over [-3, 3]^2
    best = min(itertools.product(range(-3, 4), repeat=2),
               key=lambda c: np.linalg.norm(B @ np.array(c) - [1.9, 0.4]))
    assert tuple(res.coefficients) == best == (1, 0)
    assert np.allclose(res.point, [2, 0])


def test_cvp_lattice_point_target(rng):
    B = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    c = np.array([1 - 2j, 3j, -1])
    res = cvp_sphere_decode(LatticeBasis(B), B @ c)
    assert res.distance == pytest.approx(0.0, abs=1e-9)
    assert np.array_equal(res.coefficients, c)


def test_cvp_distance_invariant(rng):
    B = rng.standard_normal((4, 3))
    t = rng.standard_normal(4)
    res = cvp_sphere_decode(LatticeBasis(B), t)
    assert abs(res.distance - np.linalg.norm(t - res.point)) <= 1e-10


def test_cvp_tie_breaks_lexicographically():
    # (0.5, 0) is equidistant from coefficients (0, 0) and (1, 0)
    res = cvp_sphere_decode(LatticeBasis(np.eye(2)), np.array([0.5, 0.0]))
    assert tuple(res.coefficients) == (0, 0)
    res = cvp_sphere_decode(LatticeBasis(np.eye(2)), np.array([-0.5, 0.5]))
    assert tuple(res.coefficients) == (-1, 0)


def test_cvp_radius_hint(rng):
    L = LatticeBasis(np.eye(3))
    t = np.array([0.4, 0.4, 0.4])
    d = math.sqrt(3 * 0.16)
    assert cvp_sphere_decode(L, t, radius_hint=d + 1e-9).distance == pytest.approx(d)
    with pytest.raises(NotFoundError):
        cvp_sphere_decode(L, t, radius_hint=0.5)


def test_cvp_capacity_cap(rng):
    L = LatticeBasis(np.eye(42))
    with pytest.raises(CapacityError):
        cvp_sphere_decode(L, np.zeros(42))
    with pytest.raises(CapacityError):
        svp_shortest(LatticeBasis(np.eye(26)))


def test_cvp_dimension_mismatch():
    with pytest.raises(DimensionError):
        cvp_sphere_decode(LatticeBasis(np.eye(2)), np.zeros(3))


def test_cvp_matches_exhaustive_and_beats_babai(rng):
    for _ in range(2000):
        B, t = random_instance(rng)
        L = LatticeBasis(B)
        tr = L.to_real(t)
        bab = babai_nearest_plane(L, t)
        ranges = coefficient_box(L.real_basis, tr, bab.distance)
        if math.prod(len(r) for r in ranges) > 200_000:
            continue
        exact = cvp_sphere_decode(L, t)
        _, d = cvp_exhaustive(L.real_basis, tr, bab.distance)
        assert exact.distance == pytest.approx(d, rel=1e-9, abs=1e-12)
        assert exact.distance <= bab.distance + 1e-12
        assert bab.distance <= 2 ** (L.dim / 2) * exact.distance + 1e-12


def test_cvp_without_reduction_agrees(rng):
    for _ in range(100):
        B, t = random_instance(rng, 5)
        L = LatticeBasis(B)
        a = cvp_sphere_decode(L, t)
        b = cvp_sphere_decode(L, t, reduce=False)
        assert a.distance == pytest.approx(b.distance, rel=1e-9, abs=1e-12)


def test_box_decode_matches_enumeration(rng):
    for _ in range(50):
        B = rng.standard_normal((4, 3))
        t = rng.standard_normal(4) * 2
        lo, hi = np.array([0, -1, 0]), np.array([2, 1, 3])
        res = box_sphere_decode(LatticeBasis(B), t, lo, hi)
        cands = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
        d = min(np.linalg.norm(B @ np.array(c) - t) for c in cands)
        assert res.distance == pytest.approx(d, rel=1e-12)
        assert np.all(res.coefficients >= lo) and np.all(res.coefficients <= hi)


# SVP


def test_svp_examples():
    assert svp_shortest(LatticeBasis(np.eye(4)))[1] == pytest.approx(1.0)
    assert svp_shortest(LatticeBasis(np.diag([3.0, 5.0])))[1] == pytest.approx(3.0)


def test_svp_random_8d_matches_boxed_enumeration(rng):
    done = 0
    while done < 3:
        B = rng.standard_normal((8, 8))
        L = LatticeBasis(B)
        vec, lam = svp_shortest(L)
        assert np.linalg.norm(vec) == pytest.approx(lam)
        # every vector no longer than the shortest reduced column lies in this box
        Br = L.reduced[0]
        r = float(np.min(np.linalg.norm(Br, axis=0)))
        ranges = coefficient_box(Br, np.zeros(8), r * (1 + 1e-9))
        if math.prod(len(x) for x in ranges) > 2_000_000:
            continue
        X = np.stack(np.meshgrid(*[np.arange(x.start, x.stop) for x in ranges], indexing="ij"), -1).reshape(-1, 8)
        X = X[np.any(X != 0, axis=1)]
        assert lam == pytest.approx(float(np.min(np.linalg.norm(X @ Br.T, axis=1))), rel=1e-9)
        done += 1


def test_svp_small_dims_exact(rng):
    for _ in range(30):
        n = int(rng.integers(2, 5))
        B = rng.standard_normal((n, n))
        Br = LatticeBasis(B).reduced[0]
        _, lam = svp_shortest(LatticeBasis(B))
        assert lam == pytest.approx(svp_exhaustive(Br, 3), rel=1e-9)


# geometry


def test_effective_radius_examples():
    Z2 = LatticeBasis(np.eye(2))
    assert effective_radius(Z2, "exact_ball") == pytest.approx(1 / math.sqrt(math.pi))
    assert effective_radius(Z2, "asymptotic") == pytest.approx(math.sqrt(2 / (2 * math.pi * math.e)))
    C1 = LatticeBasis(np.array([[1.0 + 0j]]))
    assert effective_radius(C1) == pytest.approx(math.sqrt(1 / (math.pi * math.e)))
    with pytest.raises(ValueError):
        effective_radius(Z2, "other")


def test_effective_radius_complex_square_formula(rng):
    n = 5
    B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    expected = math.sqrt(n / (math.pi * math.e)) * abs(np.linalg.det(B)) ** (1 / n)
    assert effective_radius(LatticeBasis(B)) == pytest.approx(expected, rel=1e-10)


def test_dual_basis_pairs_to_identity(rng):
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    D = dual_basis(LatticeBasis(B)).basis
    assert np.allclose(D.conj().T @ B, np.eye(4))


def test_covering_bound_examples():
    assert covering_radius_upper_bound(LatticeBasis(np.eye(2, dtype=complex))) == pytest.approx(2.0)
    assert covering_radius_upper_bound(LatticeBasis(2 * np.eye(2, dtype=complex))) == pytest.approx(4.0)


def test_covering_bound_exceeds_sampled_deep_hole(rng):
    for shape in ((2, 2), (4, 4)):
        for cplx in (False, True):
            if cplx:
                k = shape[0] // 2
                B = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            else:
                B = rng.standard_normal(shape)
            L = LatticeBasis(B)
            assert covering_radius_upper_bound(L) >= sampled_deep_hole(L, 500, rng)


def test_covering_exact_2d_examples(rng):
    assert covering_radius_exact_2d(LatticeBasis(np.eye(2))) == pytest.approx(math.sqrt(2) / 2)
    hexa = np.array([[1.0, 0.5], [0.0, math.sqrt(3) / 2]])
    assert covering_radius_exact_2d(LatticeBasis(hexa)) == pytest.approx(1 / math.sqrt(3))
    with pytest.raises(DimensionError):
        covering_radius_exact_2d(LatticeBasis(np.eye(3)))


@pytest.mark.slow
def test_covering_exact_2d_sheared_vs_sampling():
    B = np.array([[1.0, 0.3], [0.0, 1.0]])
    L = LatticeBasis(B)
    sampled = sampled_deep_hole(L, 100_000, np.random.default_rng(11))
    assert covering_radius_exact_2d(L) == pytest.approx(sampled, rel=0.01)
    assert covering_radius_exact_2d(L) >= sampled - 1e-12


def test_covering_exact_2d_dominates_sampling(rng):
    for _ in range(10):
        L = LatticeBasis(rng.standard_normal((2, 2)))
        exact = covering_radius_exact_2d(L)
        assert exact >= sampled_deep_hole(L, 2000, rng) - 1e-9
        assert exact <= covering_radius_upper_bound(L) + 1e-9


def test_gaussian_heuristic_at_8(rng):
    ratios = [gaussian_heuristic_ratio(8, rng) for _ in range(200)]
    assert 0.8 <= np.mean(ratios) <= 1.2
