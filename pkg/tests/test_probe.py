import numpy as np
import pytest

from embq import probe
from embq.core import DataError

from oracles import jacobi_svd, tolerance


def loss_identity_reference(x, y):
    """|Y|_F^2 - |U_r' Y|_F^2 from an independent SVD."""
    u, sigma, _ = jacobi_svd(x)
    tol = tolerance(x.shape[0], x.shape[1], float(sigma[0]))
    r = int(np.count_nonzero(sigma > tol))
    ur = u[:, :r]
    return float((y * y).sum()) - float(((ur.T @ y) ** 2).sum())


def test_fit_identity_features():
    y = probe.one_hot_labels(np.array([0, 1, 2]))
    w = probe.fit(np.eye(3), y)
    assert np.allclose(w, y)
    assert probe.mse_loss(w, np.eye(3), y) <= 1e-20
    assert probe.predict_accuracy(w, np.eye(3), y) == 1.0


def test_fit_inconsistent_labels_compromises():
    x = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    y = probe.one_hot_labels(np.array([0, 1, 1]))
    w = probe.fit(x, y)
    assert probe.mse_loss(w, x, y) > 0.1


def test_fit_dimension_mismatch():
    with pytest.raises(DataError, match="rows"):
        probe.fit(np.eye(3), probe.one_hot_labels(np.array([0, 1])))


def test_loss_identity_random():
    rng = np.random.default_rng(31)
    x = rng.standard_normal((40, 8))
    y = probe.one_hot_labels(rng.integers(0, 3, size=40), 3)
    w = probe.fit(x, y)
    got = probe.mse_loss(w, x, y)
    assert abs(got - loss_identity_reference(x, y)) <= 1e-8


def test_optimality_under_perturbation():
    rng = np.random.default_rng(32)
    x = rng.standard_normal((30, 6))
    y = probe.one_hot_labels(rng.integers(0, 3, size=30), 3)
    w = probe.fit(x, y)
    base = probe.mse_loss(w, x, y)
    for _ in range(20):
        delta = rng.standard_normal(w.shape)
        delta /= np.linalg.norm(delta) / 1e-3
        assert probe.mse_loss(w + delta, x, y) >= base - 1e-12


def test_null_space_shift_leaves_loss_unchanged():
    rng = np.random.default_rng(33)
    # rank-deficient features: d = 6 but only 3 independent directions
    basis = rng.standard_normal((3, 6))
    x = rng.standard_normal((25, 3)) @ basis
    y = probe.one_hot_labels(rng.integers(0, 2, size=25), 2)
    w = probe.fit(x, y)
    base = probe.mse_loss(w, x, y)
    _, sigma, vt = np.linalg.svd(x, full_matrices=True)
    kernel = vt[3:].T  # columns spanning ker(X)
    for _ in range(5):
        a = kernel @ rng.standard_normal((kernel.shape[1], 2))
        assert abs(probe.mse_loss(w + a, x, y) - base) <= 1e-8


def test_predict_accuracy_tie_break_lowest_index():
    w = np.zeros((4, 3))
    x = np.ones((10, 4))
    labels = np.array([0, 0, 0, 1, 1, 2, 2, 2, 2, 2])
    y = probe.one_hot_labels(labels)
    # all scores tie at 0, argmax resolves to class 0
    assert probe.predict_accuracy(w, x, y) == 0.3


def test_predict_matches_bruteforce_argmax():
    rng = np.random.default_rng(34)
    x = rng.standard_normal((40, 8))
    y = probe.one_hot_labels(rng.integers(0, 3, size=40), 3)
    w = probe.fit(x, y)
    scores = x @ w
    correct = 0
    truth = np.argmax(y, axis=1)
    for i in range(40):
        best, best_j = -np.inf, 0
        for j in range(3):
            if scores[i, j] > best:
                best, best_j = scores[i, j], j
        correct += int(best_j == truth[i])
    assert probe.predict_accuracy(w, x, y) == correct / 40


def test_mse_loss_zero_weights_is_row_count():
    y = probe.one_hot_labels(np.array([0, 1, 1, 0]))
    w = np.zeros((3, 2))
    x = np.ones((4, 3))
    assert probe.mse_loss(w, x, y) == 4.0


def test_mse_loss_matches_elementwise_sum():
    rng = np.random.default_rng(35)
    x = rng.standard_normal((12, 5))
    y = probe.one_hot_labels(rng.integers(0, 2, size=12), 2)
    w = rng.standard_normal((5, 2))
    resid = y - x @ w
    want = sum(float(resid[i, j]) ** 2 for i in range(12) for j in range(2))
    assert abs(probe.mse_loss(w, x, y) - want) <= 1e-12 * max(want, 1.0)


def test_one_hot_validation():
    with pytest.raises(DataError):
        probe.one_hot_labels(np.array([0, 0, 0]))  # single class
    with pytest.raises(DataError):
        probe.one_hot_labels(np.array([0, 3]), num_classes=3)
    with pytest.raises(DataError):
        probe.check_one_hot(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DataError):
        probe.check_one_hot(np.array([[0.5, 0.5], [0.0, 1.0]]))
