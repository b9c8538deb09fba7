"""Closed-form least-squares linear probe for scoring representations.

The probe solves min_W |Y - X W|_F^2 in closed form through the
tolerance-truncated SVD and scores by argmax accuracy. No bias term, no
regularization, no iterative training.
"""

from __future__ import annotations

import numpy as np

from .core import DataError, check_matrix, thin_svd


def one_hot_labels(labels, num_classes: int | None = None) -> np.ndarray:
    """Encode integer class labels as an n x c one-hot {0,1} matrix."""
    y = np.asarray(labels)
    if y.ndim != 1:
        raise DataError(f"labels must be 1-D, got shape {y.shape}")
    if y.size == 0:
        raise DataError("labels are empty")
    if not np.issubdtype(y.dtype, np.integer):
        raise DataError(f"labels must be integers, got dtype {y.dtype}")
    c = int(y.max()) + 1 if num_classes is None else int(num_classes)
    if c < 2:
        raise DataError(f"need at least 2 classes, got {c}")
    if y.min() < 0 or y.max() >= c:
        raise DataError(f"label out of range [0, {c}): {int(y.min())}..{int(y.max())}")
    out = np.zeros((y.size, c))
    out[np.arange(y.size), y] = 1.0
    return out


def check_one_hot(y) -> np.ndarray:
    """Validate an n x c one-hot label matrix: {0,1} entries, one 1 per row, c >= 2."""
    a = check_matrix(y, "labels")
    if a.shape[1] < 2:
        raise DataError(f"labels need c >= 2 classes, got c = {a.shape[1]}")
    if not np.all((a == 0.0) | (a == 1.0)):
        raise DataError("labels must contain only 0 and 1")
    rowsums = a.sum(axis=1)
    bad = np.flatnonzero(rowsums != 1.0)
    if bad.size:
        raise DataError(f"label row {int(bad[0])} has {int(rowsums[bad[0]])} ones, need exactly 1")
    return a


def fit(x, y) -> np.ndarray:
    """Minimum-norm least-squares weights W = pinv(X) Y.

    Uses the tolerance-truncated SVD from core, so directions below the
    numerical-rank cutoff never get amplified. Returns a d x c matrix; the
    null-space component of the solution family is fixed at zero.
    """
    a = check_matrix(x, "features")
    labels = check_one_hot(y)
    if a.shape[0] != labels.shape[0]:
        raise DataError(
            f"features have {a.shape[0]} rows but labels have {labels.shape[0]}"
        )
    f = thin_svd(a)
    r = f.rank
    if r == 0:
        return np.zeros((a.shape[1], labels.shape[1]))
    ur = f.u[:, :r]
    vr = f.vt[:r, :]
    sr = f.sigma[:r]
    return vr.T @ ((ur.T @ labels) / sr[:, None])


def predict_labels(weights, x) -> np.ndarray:
    """Argmax class per row of X W; ties resolve to the lowest class index."""
    w = check_matrix(weights, "weights")
    a = check_matrix(x, "features")
    if a.shape[1] != w.shape[0]:
        raise DataError(f"features have d = {a.shape[1]} but weights expect {w.shape[0]}")
    return np.argmax(a @ w, axis=1)


def predict_accuracy(weights, x, y) -> float:
    """Fraction of rows whose argmax score matches the one-hot label."""
    labels = check_one_hot(y)
    pred = predict_labels(weights, x)
    if labels.shape[0] != pred.shape[0]:
        raise DataError(
            f"features have {pred.shape[0]} rows but labels have {labels.shape[0]}"
        )
    if labels.shape[1] != np.asarray(weights).shape[1]:
        raise DataError(
            f"labels have c = {labels.shape[1]} but weights produce {np.asarray(weights).shape[1]}"
        )
    truth = np.argmax(labels, axis=1)
    return float(np.mean(pred == truth))


def mse_loss(weights, x, y) -> float:
    """Squared Frobenius norm of the residual Y - X W (no 1/n factor)."""
    w = check_matrix(weights, "weights")
    a = check_matrix(x, "features")
    labels = check_one_hot(y)
    if a.shape[0] != labels.shape[0]:
        raise DataError(
            f"features have {a.shape[0]} rows but labels have {labels.shape[0]}"
        )
    if a.shape[1] != w.shape[0] or labels.shape[1] != w.shape[1]:
        raise DataError(
            f"weights {w.shape} do not map features d = {a.shape[1]} "
            f"to labels c = {labels.shape[1]}"
        )
    resid = labels - a @ w
    return float((resid * resid).sum())
