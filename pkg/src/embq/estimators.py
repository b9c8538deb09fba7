"""Scikit-learn style wrappers so the toolkit composes with standard pipelines.

These estimators are thin adapters over the functional core; they add
get_params/set_params, fitted attributes, and label handling, never metric
logic of their own.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from . import probe
from .core import DataError, check_matrix
from .metrics import MetricReport, full_report


class EmbeddingQualityEvaluator(BaseEstimator):
    """Computes the full metric report for an embedding matrix on fit.

    Parameters
    ----------
    center : bool, default True
        Center columns before the covariance spectrum (affects nesum).
    normalize_rows : bool, default False
        Scale rows to unit norm first; also enables self_cluster.

    Attributes
    ----------
    report_ : MetricReport
    n_features_in_ : int
    """

    def __init__(self, center: bool = True, normalize_rows: bool = False):
        self.center = center
        self.normalize_rows = normalize_rows

    def fit(self, X, y=None):
        a = check_matrix(X)
        self.report_ = full_report(a, center=self.center, normalize_rows=self.normalize_rows)
        self.n_features_in_ = a.shape[1]
        return self

    def fit_report(self, X) -> MetricReport:
        """Fit and return the metric report in one call."""
        return self.fit(X).report_


class LinearProbe(ClassifierMixin, BaseEstimator):
    """Closed-form minimum-norm least-squares classifier on one-hot targets.

    fit solves pinv(X) Y exactly; predict takes the row argmax with ties
    resolved to the lowest class index, so `score` is the deterministic
    probe accuracy.

    Attributes
    ----------
    classes_ : ndarray of the distinct labels seen in fit
    weights_ : (d, c) weight matrix
    """

    def fit(self, X, y):
        a = check_matrix(X, "features")
        labels = np.asarray(y)
        if labels.ndim != 1:
            raise DataError(f"labels must be 1-D, got shape {labels.shape}")
        if labels.shape[0] != a.shape[0]:
            raise DataError(
                f"features have {a.shape[0]} rows but labels have {labels.shape[0]}"
            )
        self.classes_, encoded = np.unique(labels, return_inverse=True)
        if self.classes_.size < 2:
            raise DataError(f"need at least 2 classes, got {self.classes_.size}")
        self.weights_ = probe.fit(a, probe.one_hot_labels(encoded, self.classes_.size))
        self.n_features_in_ = a.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        a = check_matrix(X, "features")
        if a.shape[1] != self.weights_.shape[0]:
            raise DataError(
                f"features have d = {a.shape[1]} but probe was fit with d = {self.weights_.shape[0]}"
            )
        return a @ self.weights_

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]

    def mse(self, X, y) -> float:
        """Squared Frobenius residual of the one-hot targets under this probe."""
        labels = np.asarray(y)
        idx = np.searchsorted(self.classes_, labels)
        if np.any(idx >= self.classes_.size) or np.any(self.classes_[idx] != labels):
            raise DataError("labels contain classes unseen in fit")
        return probe.mse_loss(
            self.weights_, X, probe.one_hot_labels(idx, self.classes_.size)
        )
