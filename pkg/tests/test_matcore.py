import math

import numpy as np
import pytest

from artnoise.errors import DimensionError, RankDeficiencyError
from artnoise.matcore import (
    TAU_NULL,
    abs_det,
    log_abs_det,
    null_space,
    pseudoinverse,
    qr_decompose,
    real_embedding,
    svd_decompose,
    vec_complex,
    vec_real,
)


def cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def fro(a):
    return np.linalg.norm(a, "fro")


def test_svd_identity():
    U, S, V = svd_decompose(np.eye(2))
    assert np.allclose(S, [1, 1])
    assert np.allclose(U @ np.diag(S) @ V.conj().T, np.eye(2))
    assert np.allclose(np.abs(U), np.eye(2)) and np.allclose(np.abs(V), np.eye(2))


def test_svd_diagonal():
    _, S, _ = svd_decompose(np.diag([3.0, 2.0]))
    assert np.allclose(S, [3, 2])


def test_svd_random_9x10_residual_and_unitarity(rng):
    H = cgauss(rng, 9, 10)
    U, S, V = svd_decompose(H)
    assert U.shape == (9, 9) and V.shape == (10, 10)
    Sfull = np.zeros((9, 10))
    Sfull[:9, :9] = np.diag(S)
    assert fro(H - U @ Sfull @ V.conj().T) <= 1e-10 * fro(H)
    assert fro(U.conj().T @ U - np.eye(9)) <= 1e-10
    assert fro(V.conj().T @ V - np.eye(10)) <= 1e-10
    assert np.all(S >= 0) and np.all(np.diff(S) <= 0)


def test_null_space_row_vector():
    Z = null_space(np.array([[1.0, 0.0, 0.0]]))
    assert Z.shape == (3, 2)
    assert np.allclose(np.array([[1, 0, 0]]) @ Z, 0)
    # spans {e2, e3}: first coordinates vanish and columns are orthonormal
    assert np.allclose(Z[0], 0)
    assert np.allclose(Z.conj().T @ Z, np.eye(2))


def test_null_space_random_9x10(rng):
    H = cgauss(rng, 9, 10)
    Z = null_space(H)
    assert Z.shape == (10, 1)
    assert np.linalg.norm(H @ Z) <= 1e-10 * fro(H)
    assert abs(np.linalg.norm(Z) - 1) <= 1e-12


def test_null_space_duplicated_row_raises(rng):
    H = cgauss(rng, 3, 5)
    H[2] = H[0]
    with pytest.raises(RankDeficiencyError):
        null_space(H)


def test_null_space_needs_wide_matrix(rng):
    with pytest.raises(DimensionError):
        null_space(cgauss(rng, 4, 4))


def test_pseudoinverse_examples():
    assert np.allclose(pseudoinverse(np.eye(3)), np.eye(3))
    assert np.allclose(pseudoinverse(np.array([[2.0, 0.0]])), [[0.5], [0.0]])


def test_pseudoinverse_random_is_min_norm_right_inverse(rng):
    H = cgauss(rng, 9, 10)
    Hd = pseudoinverse(H)
    assert fro(H @ Hd - np.eye(9)) <= 1e-10
    ref = H.conj().T @ np.linalg.inv(H @ H.conj().T)
    assert fro(Hd - ref) <= 1e-10 * fro(ref)


def test_pseudoinverse_rank_deficient_raises(rng):
    H = cgauss(rng, 2, 4)
    H[1] = 2 * H[0]
    with pytest.raises(RankDeficiencyError):
        pseudoinverse(H)


def test_qr_examples():
    Q, R = qr_decompose(np.eye(3))
    assert np.allclose(Q, np.eye(3)) and np.allclose(R, np.eye(3))
    Q, R = qr_decompose(np.array([[0.0], [3.0]]))
    assert np.allclose(R, [[3.0]]) and np.allclose(Q, [[0.0], [1.0]])


def test_qr_random_10x9(rng):
    A = cgauss(rng, 10, 9)
    Q, R = qr_decompose(A)
    assert fro(A - Q @ R) <= 1e-10 * fro(A)
    assert fro(Q.conj().T @ Q - np.eye(9)) <= 1e-10
    assert np.allclose(np.tril(R, -1), 0)
    d = np.diagonal(R)
    assert np.all(d.real >= 0) and np.allclose(d.imag, 0)


def test_qr_rank_deficient_raises(rng):
    A = cgauss(rng, 5, 3)
    A[:, 2] = A[:, 0] + A[:, 1]
    with pytest.raises(RankDeficiencyError):
        qr_decompose(A)


def test_abs_det_examples(rng):
    assert abs_det(np.eye(5)) == pytest.approx(1.0)
    assert abs_det(np.diag([2, 3j])) == pytest.approx(6.0)
    Q, _ = np.linalg.qr(cgauss(rng, 6, 6))
    assert abs(abs_det(Q) - 1) <= 1e-10
    assert abs_det(np.zeros((3, 3))) == 0.0
    with pytest.raises(DimensionError):
        abs_det(np.ones((2, 3)))


def test_log_abs_det_matches(rng):
    A = cgauss(rng, 5, 5)
    assert log_abs_det(A) == pytest.approx(math.log(abs(np.linalg.det(A))), rel=1e-10)


def test_real_embedding_examples(rng):
    assert np.array_equal(real_embedding(np.array([[1j]])), [[0, -1], [1, 0]])
    assert np.array_equal(real_embedding(np.array([[1.0]])), np.eye(2))
    B = cgauss(rng, 2, 2)
    assert np.linalg.det(real_embedding(B)) == pytest.approx(abs(np.linalg.det(B)) ** 2, rel=1e-10)


def test_real_embedding_is_isometric(rng):
    B = cgauss(rng, 4, 3)
    x = cgauss(rng, 3)
    assert np.allclose(real_embedding(B) @ vec_real(x), vec_real(B @ x))
    assert np.allclose(vec_complex(vec_real(x)), x)


# randomized factorization residuals

SIZES = [(r, c) for r in (1, 3, 8, 20) for c in (1, 4, 9, 20)]


def test_factorization_residuals_over_many_instances(rng):
    count = 0
    while count < 1000:
        for r, c in SIZES:
            A = cgauss(rng, r, c)
            n = fro(A)
            U, S, V = svd_decompose(A)
            Sm = np.zeros((r, c))
            Sm[: len(S), : len(S)] = np.diag(S)
            assert fro(A - U @ Sm @ V.conj().T) <= 1e-10 * n
            if r >= c:
                Q, R = qr_decompose(A)
                assert fro(A - Q @ R) <= 1e-10 * n
            if r <= c:
                assert fro(A @ pseudoinverse(A) - np.eye(r)) <= 1e-10 * max(1.0, np.linalg.cond(A))
            if r < c:
                assert fro(A @ null_space(A)) <= TAU_NULL * n
            count += 1


def test_real_embedding_is_ring_homomorphism(rng):
    for n in (1, 2, 5, 8):
        A, B = cgauss(rng, n, n), cgauss(rng, n, n)
        assert np.allclose(real_embedding(A @ B), real_embedding(A) @ real_embedding(B), atol=1e-12)
        assert np.allclose(real_embedding(A + B), real_embedding(A) + real_embedding(B))


def test_abs_det_multiplicative(rng):
    for _ in range(50):
        A, B = cgauss(rng, 8, 8), cgauss(rng, 8, 8)
        assert abs_det(A @ B) == pytest.approx(abs_det(A) * abs_det(B), rel=1e-8)


def test_inputs_must_be_finite():
    with pytest.raises(ValueError):
        svd_decompose(np.array([[1.0, np.nan]]))
