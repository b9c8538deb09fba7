import numpy as np
import pytest

from embq.core import (
    DataError,
    DomainError,
    check_matrix,
    compute_covariance_spectrum,
    compute_spectrum,
    gram_dxd,
    normalize_rows,
)

from oracles import explicit_covariance, jacobi_eigh, jacobi_svd


def random_orthogonal(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def test_spectrum_identity():
    s = compute_spectrum(np.eye(4))
    assert np.allclose(s.sigma, np.ones(4))
    assert s.rank == 4
    assert np.allclose(s.left_row_norms, np.ones(4))
    assert np.allclose(s.right_row_norms, np.ones(4))


def test_spectrum_zero_matrix():
    s = compute_spectrum(np.zeros((3, 5)))
    assert s.sigma.shape == (3,)
    assert np.all(s.sigma == 0.0)
    assert s.rank == 0
    assert s.tol == 0.0


def test_spectrum_matches_bruteforce_svd():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((8, 3))
    s = compute_spectrum(a)
    _, sigma_ref, _ = jacobi_svd(a)
    assert np.max(np.abs(s.sigma - sigma_ref)) <= 1e-10 * sigma_ref[0]


def test_spectrum_row_norms_sum_to_rank():
    rng = np.random.default_rng(12)
    for shape in [(10, 4), (4, 10), (30, 30)]:
        s = compute_spectrum(rng.standard_normal(shape))
        assert abs(s.left_row_norms.sum() - s.rank) <= 1e-8
        assert abs(s.right_row_norms.sum() - s.rank) <= 1e-8


def test_nonfinite_rejected_with_location():
    a = np.ones((3, 4))
    a[1, 2] = np.nan
    with pytest.raises(DataError, match=r"row 1, col 2"):
        check_matrix(a)
    a[1, 2] = np.inf
    with pytest.raises(DataError, match=r"row 1, col 2"):
        compute_spectrum(a)


def test_check_matrix_shape_errors():
    with pytest.raises(DataError, match="2-D"):
        check_matrix(np.ones(3))
    with pytest.raises(DataError):
        check_matrix(np.ones((0, 2)))


def test_covariance_zero_matrix():
    cs = compute_covariance_spectrum(np.zeros((4, 3)))
    assert np.all(cs.lam == 0.0)


def test_covariance_two_point_symmetric():
    cs = compute_covariance_spectrum(np.array([[1.0, 0.0], [-1.0, 0.0]]), center=True)
    assert np.allclose(cs.lam, [1.0, 0.0])


def test_covariance_matches_bruteforce_eig():
    rng = np.random.default_rng(13)
    a = rng.standard_normal((100, 5))
    for center in (True, False):
        cs = compute_covariance_spectrum(a, center=center)
        lam_ref, _ = jacobi_eigh(explicit_covariance(a, center=center))
        lam_ref = np.maximum(lam_ref, 0.0)
        assert np.max(np.abs(cs.lam - lam_ref)) <= 1e-10 * max(lam_ref[0], 1.0)


def test_covariance_nonincreasing_nonnegative():
    rng = np.random.default_rng(14)
    cs = compute_covariance_spectrum(rng.standard_normal((40, 12)))
    assert np.all(np.diff(cs.lam) <= 0.0)
    assert np.all(cs.lam >= 0.0)


def test_normalize_rows_345():
    out = normalize_rows(np.array([[3.0, 4.0]]))
    assert np.allclose(out, [[0.6, 0.8]])


def test_normalize_rows_unit_rows_bit_exact():
    rng = np.random.default_rng(15)
    a = rng.standard_normal((6, 5))
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    out = normalize_rows(a)
    assert np.array_equal(out, a)


def test_normalize_rows_zero_row_rejected():
    a = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(DomainError, match="index 1"):
        normalize_rows(a)


def test_gram_identity():
    assert np.array_equal(gram_dxd(np.eye(3)), np.eye(3))


def test_gram_orthonormal_rows_projector():
    a = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    g = gram_dxd(a)
    assert np.allclose(g @ g, g)
    assert abs(np.trace(g) - 2.0) <= 1e-12


def test_gram_frobenius_equals_pairwise():
    rng = np.random.default_rng(16)
    a = rng.standard_normal((50, 6))
    g = gram_dxd(a)
    got = float((g * g).sum())
    want = 0.0
    for i in range(50):
        for j in range(50):
            want += float(a[i] @ a[j]) ** 2
    assert abs(got - want) <= 1e-10 * want


def test_row_permutation_invariance():
    rng = np.random.default_rng(17)
    a = rng.standard_normal((20, 7))
    perm = rng.permutation(20)
    s1 = compute_spectrum(a)
    s2 = compute_spectrum(a[perm])
    assert np.max(np.abs(s1.sigma - s2.sigma)) <= 1e-10 * s1.sigma[0]
    assert np.max(np.abs(s1.left_row_norms[perm] - s2.left_row_norms)) <= 1e-8
    cs1 = compute_covariance_spectrum(a)
    cs2 = compute_covariance_spectrum(a[perm])
    assert np.max(np.abs(cs1.lam - cs2.lam)) <= 1e-10 * max(cs1.lam[0], 1.0)


def test_right_rotation_invariance():
    rng = np.random.default_rng(18)
    a = rng.standard_normal((25, 9))
    q = random_orthogonal(9, rng)
    s1, s2 = compute_spectrum(a), compute_spectrum(a @ q)
    assert np.max(np.abs(s1.sigma - s2.sigma)) <= 1e-8 * s1.sigma[0]
    cs1, cs2 = compute_covariance_spectrum(a), compute_covariance_spectrum(a @ q)
    assert np.max(np.abs(cs1.lam - cs2.lam)) <= 1e-8 * max(cs1.lam[0], 1.0)


def test_scaling_covariance():
    rng = np.random.default_rng(19)
    a = rng.standard_normal((15, 6))
    for c in (1e-3, 3.0, 1e3):
        s1, s2 = compute_spectrum(a), compute_spectrum(c * a)
        assert np.max(np.abs(c * s1.sigma - s2.sigma)) <= 1e-8 * s2.sigma[0]
        assert s1.rank == s2.rank
        cs1, cs2 = compute_covariance_spectrum(a), compute_covariance_spectrum(c * a)
        assert np.max(np.abs(c * c * cs1.lam - cs2.lam)) <= 1e-8 * cs2.lam[0]


def test_frobenius_identity():
    rng = np.random.default_rng(20)
    a = rng.standard_normal((12, 8))
    s = compute_spectrum(a)
    assert abs(float(s.sigma @ s.sigma) - float((a * a).sum())) <= 1e-10 * float((a * a).sum())
