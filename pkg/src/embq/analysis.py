"""Subsampling-stability profiles, Spearman rank correlation, and experiment aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .core import (
    DataError,
    DomainError,
    check_matrix,
    compute_covariance_spectrum,
    compute_spectrum,
)
from .rng import check_seed, make_rng

# Matrix-level metric registry: name -> callable(matrix) -> float.
METRIC_FUNCTIONS = {
    "alpha_req": lambda a: metrics.alpha_req(compute_spectrum(a)),
    "rankme": lambda a: metrics.rankme(compute_spectrum(a)),
    "rankme_star": lambda a: metrics.rankme_star(compute_spectrum(a)),
    "nesum": lambda a: metrics.nesum(compute_covariance_spectrum(a)),
    "stable_rank": lambda a: metrics.stable_rank(compute_spectrum(a)),
    "cond_number": lambda a: metrics.cond_number(compute_spectrum(a)),
    "coherence": lambda a: metrics.coherence(compute_spectrum(a))[2],
    "self_cluster": metrics.self_cluster,
}

METRIC_NAMES = tuple(METRIC_FUNCTIONS)

# Table thresholds for the min-batch summary.
FACTOR_THRESHOLDS = (0.5, 0.7, 0.9, 0.95)


@dataclass(frozen=True)
class StabilityProfile:
    """Per-batch-size approximation quality of a metric under row subsampling.

    mean_factor and lower_bound_rate are None for a batch size where every
    trial failed; failures counts trials where the metric was undefined on
    the subsample.
    """

    metric_name: str
    batch_sizes: list[int]
    mean_factor: list[Optional[float]]
    lower_bound_rate: list[Optional[float]]
    failures: list[int]
    trials: int
    seed: int
    full_value: float
    bound_verdict: str


@dataclass(frozen=True)
class CorrelationReport:
    """Spearman rank correlation between a metric and downstream accuracy."""

    metric_name: str
    rho: float
    pairs: int


def _sorted_sample(rng: np.random.Generator, n: int, batch: int) -> np.ndarray:
    idx = rng.choice(n, size=batch, replace=False, shuffle=False)
    return np.sort(idx)


def subsample_indices(n: int, batch: int, seed: int) -> np.ndarray:
    """Ascending indices of a uniform sample of `batch` distinct rows out of n."""
    if not 1 <= batch <= n:
        raise DataError(f"batch must be in [1, {n}], got {batch}")
    return _sorted_sample(make_rng(check_seed(seed), batch), n, batch)


def subsample_rows(x, batch: int, seed: int) -> np.ndarray:
    """Order-preserving uniform sample of `batch` distinct rows, without replacement.

    Deterministic per (seed, batch): the same pair always selects the same
    rows, independent of platform.
    """
    a = check_matrix(x)
    return a[subsample_indices(a.shape[0], batch, seed)]


def symmetric_factor(sampled: float, full: float) -> Optional[float]:
    """min(sampled/full, full/sampled), with exact equality (including 0 = 0) giving 1.0.

    None when the ratio is undefined: opposite signs, or exactly one of the
    two values zero.
    """
    if sampled == full:
        return 1.0
    if sampled == 0.0 or full == 0.0 or (sampled < 0.0) != (full < 0.0):
        return None
    return min(sampled / full, full / sampled)


def stability_profile(
    x,
    metric_name: str,
    batch_sizes: Sequence[int],
    trials: int,
    seed: int,
) -> StabilityProfile:
    """Stability of one metric under row subsampling at each batch size.

    Runs `trials` independent subsamples per batch size and records the mean
    symmetric approximation factor and the fraction of trials where the
    sampled value lower-bounds the full-matrix value (ties count). Trials
    where the metric is undefined are counted in `failures`, never dropped
    silently. The overall bound verdict is "yes" when the sampled value
    stays at or below the full value in at least 99% of trials,
    "0.95-approximately" when 0.95 * sampled does, and "no" otherwise.
    """
    a = check_matrix(x)
    if metric_name not in METRIC_FUNCTIONS:
        raise DataError(
            f"unknown metric {metric_name!r}; choose from {', '.join(METRIC_NAMES)}"
        )
    seed = check_seed(seed)
    if trials < 1:
        raise DataError(f"trials must be >= 1, got {trials}")
    batches = [int(b) for b in batch_sizes]
    if not batches:
        raise DataError("need at least one batch size")
    n = a.shape[0]
    for prev, cur in zip(batches, batches[1:]):
        if cur <= prev:
            raise DataError(f"batch sizes must be strictly increasing, got {batches}")
    if batches[0] < 1 or batches[-1] > n:
        raise DataError(f"batch sizes must lie in [1, {n}], got {batches}")

    fn = METRIC_FUNCTIONS[metric_name]
    full_value = fn(a)

    mean_factor: list[Optional[float]] = []
    lower_bound_rate: list[Optional[float]] = []
    failures: list[int] = []
    bound_ok = 0
    bound_approx_ok = 0
    total_valued = 0

    for batch in batches:
        factors = []
        bounded = 0
        valued = 0
        failed = 0
        for trial in range(trials):
            idx = _sorted_sample(make_rng(seed, batch, trial), n, batch)
            try:
                sampled = fn(a[idx])
            except DomainError:
                failed += 1
                continue
            valued += 1
            if sampled <= full_value:
                bounded += 1
                bound_ok += 1
            if 0.95 * sampled <= full_value:
                bound_approx_ok += 1
            factor = symmetric_factor(sampled, full_value)
            if factor is not None:
                factors.append(factor)
        total_valued += valued
        failures.append(failed)
        mean_factor.append(float(np.mean(factors)) if factors else None)
        lower_bound_rate.append(bounded / valued if valued else None)

    if total_valued and bound_ok / total_valued >= 0.99:
        verdict = "yes"
    elif total_valued and bound_approx_ok / total_valued >= 0.99:
        verdict = "0.95-approximately"
    else:
        verdict = "no"

    return StabilityProfile(
        metric_name=metric_name,
        batch_sizes=batches,
        mean_factor=mean_factor,
        lower_bound_rate=lower_bound_rate,
        failures=failures,
        trials=trials,
        seed=seed,
        full_value=full_value,
        bound_verdict=verdict,
    )


def min_batch_for_factor(profile: StabilityProfile, threshold: float) -> Optional[int]:
    """Smallest batch size whose mean factor reaches `threshold`; None if unattained."""
    for batch, factor in zip(profile.batch_sizes, profile.mean_factor):
        if factor is not None and factor >= threshold:
            return batch
    return None


def fractional_ranks(values) -> np.ndarray:
    """1-based average ranks; tied values share the mean of their positions."""
    a = np.asarray(values, dtype=np.float64)
    order = np.argsort(a, kind="stable")
    ranks = np.empty(a.size)
    sorted_vals = a[order]
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson correlation of fractional ranks.

    Undefined (DomainError) when either list has zero rank variance, e.g.
    all-equal values.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1:
        raise DataError("spearman takes two 1-D value lists")
    if xa.size != ya.size:
        raise DataError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise DataError(f"need at least 2 pairs, got {xa.size}")
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()):
        raise DataError("spearman inputs must be finite")
    rx = fractional_ranks(xa)
    ry = fractional_ranks(ya)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    if vx == 0.0 or vy == 0.0:
        raise DomainError("spearman undefined: zero rank variance")
    return float((dx @ dy) / math.sqrt(vx * vy))


def correlate_experiment(
    metric_values, accuracies, metric_name: str = "metric"
) -> CorrelationReport:
    """Spearman correlation between run-averaged metric values and accuracies."""
    rho = spearman(metric_values, accuracies)
    return CorrelationReport(
        metric_name=metric_name, rho=rho, pairs=len(np.asarray(metric_values))
    )


def shuffle_split_indices(
    n: int, train_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle split of range(n) into sorted (train, test) index arrays.

    The train side gets round(train_fraction * n) rows, clipped so both
    sides are non-empty.
    """
    if n < 2:
        raise DataError(f"need n >= 2 rows to split, got {n}")
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    perm = make_rng(check_seed(seed)).permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])
