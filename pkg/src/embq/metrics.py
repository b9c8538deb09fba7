"""Spectral and geometric embedding-quality metrics.

Seven label-free metrics plus the normalized rankme_star, all derived from
the decompositions in :mod:`embq.core`. ``full_report`` evaluates everything
from a single decomposition of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import core
from .core import CovarianceSpectrum, DomainError, Spectrum


class UndefinedMetricError(DomainError):
    """One or more metrics are undefined on an input; lists every failure.

    `failures` holds (metric_name, reason) pairs, one per undefined metric.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        detail = "; ".join(f"{name}: {reason}" for name, reason in self.failures)
        super().__init__(f"metrics undefined on this input: {detail}")


def alpha_req(s: Spectrum) -> float:
    """Negated slope of the log-log regression of singular values on index.

    Ordinary least squares through (ln i, ln sigma_i) for i = 1..rank
    (1-based, above-tolerance values only). An exact power law
    sigma_i = c * i^(-a) recovers a; needs at least two points.
    """
    if s.rank < 2:
        raise DomainError(f"alpha_req needs rank >= 2, got rank {s.rank}")
    y = np.log(s.sigma[: s.rank])
    x = np.log(np.arange(1, s.rank + 1, dtype=np.float64))
    xc = x - x.mean()
    slope = float((xc @ (y - y.mean())) / (xc @ xc))
    return -slope + 0.0  # +0.0 canonicalizes -0.0 for flat spectra


def rankme(s: Spectrum) -> float:
    """Shannon entropy (nats) of the L1-normalized singular values.

    p_i = sigma_i / sum(sigma); zero values contribute 0 ln 0 := 0. Ranges
    from 0 (rank-1 collapse) to ln(min(n, d)) (flat spectrum).
    """
    total = float(s.sigma.sum())
    if total == 0.0:
        raise DomainError("rankme undefined on the zero matrix")
    p = s.sigma / total
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum()) + 0.0  # +0.0 canonicalizes -0.0 at collapse


def rankme_star(s: Spectrum) -> float:
    """rankme normalized by its maximum ln(min(n, d)), giving a value in [0, 1]."""
    k = min(s.n, s.d)
    if k < 2:
        raise DomainError("rankme_star undefined when min(n, d) = 1 (normalizer is 0)")
    return rankme(s) / math.log(k)


def nesum(cs: CovarianceSpectrum) -> float:
    """Sum of covariance eigenvalues each divided by the largest.

    Counts effectively alive directions; the all-zero spectrum returns 0
    under the 0/0 = 0 convention.
    """
    lam0 = float(cs.lam[0])
    if lam0 == 0.0:
        return 0.0
    return float(cs.lam.sum() / lam0)


def stable_rank(s: Spectrum) -> float:
    """Squared Frobenius norm over squared spectral norm: sum(sigma^2) / sigma_1^2."""
    s1 = float(s.sigma[0])
    if s1 == 0.0:
        raise DomainError("stable_rank undefined on the zero matrix")
    return float((s.sigma @ s.sigma) / (s1 * s1))


def cond_number(s: Spectrum) -> float:
    """Ratio of the largest singular value to the smallest one above tolerance.

    On rank-deficient input this is the condition number of the truncated
    spectrum; `full_report` flags that case.
    """
    if float(s.sigma[0]) == 0.0:
        raise DomainError("cond_number undefined on the zero matrix")
    return float(s.sigma[0] / s.sigma[s.rank - 1])


def coherence(s: Spectrum) -> tuple[float, float, float]:
    """Smallest coherence parameter aligning singular subspaces with the standard basis.

    Returns (left, right, combined): left = (n/r) max_i |row_i(U_r)|^2 over
    the n rows of the left block, right the same over the d rows of the
    right block, combined their max. Bounds: 1 <= combined <= max(n, d)/r.
    """
    if s.rank == 0:
        raise DomainError("coherence undefined at rank 0")
    left = s.n / s.rank * float(s.left_row_norms.max())
    right = s.d / s.rank * float(s.right_row_norms.max())
    return left, right, max(left, right)


def self_cluster(w) -> float:
    """Excess clustering of unit-norm rows over the uniform-on-sphere baseline.

    With Q the squared Frobenius norm of the row Gram matrix W W', returns
    (d Q - n (d + n - 1)) / ((d - 1)(n - 1) n): 0 for isotropic rows, 1 when
    all rows coincide. Q is evaluated as |W' W|_F^2 so the cost is O(n d^2),
    never O(n^2) pairwise work. Rows must be unit-norm to 1e-6.
    """
    a = core.check_matrix(w, "self_cluster input")
    n, d = a.shape
    if n < 2 or d < 2:
        raise DomainError(f"self_cluster needs n >= 2 and d >= 2, got {n} x {d}")
    norms = np.linalg.norm(a, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > 1e-6)
    if bad.size:
        i = int(bad[0])
        raise DomainError(
            f"self_cluster needs unit-norm rows; row {i} has norm {norms[i]:.9g} "
            "(apply normalize_rows first)"
        )
    g = core.gram_dxd(a)
    q = float((g * g).sum())
    return (d * q - n * (d + n - 1)) / ((d - 1) * (n - 1) * n)


@dataclass(frozen=True)
class MetricReport:
    """All metric values for one embedding matrix.

    self_cluster is None unless the rows were normalized (or already had
    unit norm); cond_on_truncated_spectrum marks a condition number taken
    over fewer than min(n, d) singular values.
    """

    n: int
    d: int
    rank: int
    alpha_req: float
    rankme: float
    rankme_star: float
    nesum: float
    stable_rank: float
    cond_number: float
    cond_on_truncated_spectrum: bool
    coherence_left: float
    coherence_right: float
    coherence: float
    self_cluster: Optional[float] = None

    def to_dict(self) -> dict:
        """Field-ordered plain mapping, suitable for JSON serialization."""
        return {
            "n": self.n,
            "d": self.d,
            "rank": self.rank,
            "alpha_req": self.alpha_req,
            "rankme": self.rankme,
            "rankme_star": self.rankme_star,
            "nesum": self.nesum,
            "stable_rank": self.stable_rank,
            "cond_number": self.cond_number,
            "cond_on_truncated_spectrum": self.cond_on_truncated_spectrum,
            "coherence_left": self.coherence_left,
            "coherence_right": self.coherence_right,
            "coherence": self.coherence,
            "self_cluster": self.self_cluster,
        }


def rows_are_unit_norm(x, tol: float = 1e-6) -> bool:
    """True when every row norm is within `tol` of 1."""
    a = core.check_matrix(x)
    return bool(np.all(np.abs(np.linalg.norm(a, axis=1) - 1.0) <= tol))


def full_report(x, center: bool = True, normalize_rows: bool = False) -> MetricReport:
    """Compute every metric from one decomposition of the matrix.

    When `normalize_rows` is set the rows are scaled to unit norm first and
    all metrics see the normalized matrix. self_cluster is included only
    when normalization was requested or the rows already have unit norm.
    Undefined metrics are collected into a single UndefinedMetricError
    listing each failure, rather than failing one at a time.
    """
    a = core.check_matrix(x)
    if normalize_rows:
        try:
            a = core.normalize_rows(a)
        except DomainError as exc:
            raise UndefinedMetricError([("normalize_rows", str(exc))]) from exc

    s = core.compute_spectrum(a)
    cs = core.compute_covariance_spectrum(a, center=center)

    failures: list[tuple[str, str]] = []

    def attempt(name: str, fn: Callable[[], float]) -> float:
        try:
            return fn()
        except DomainError as exc:
            failures.append((name, str(exc)))
            return math.nan

    alpha = attempt("alpha_req", lambda: alpha_req(s))
    entropy = attempt("rankme", lambda: rankme(s))
    entropy_star = attempt("rankme_star", lambda: rankme_star(s))
    ne = nesum(cs)
    srank = attempt("stable_rank", lambda: stable_rank(s))
    cond = attempt("cond_number", lambda: cond_number(s))
    if s.rank == 0:
        failures.append(("coherence", "coherence undefined at rank 0"))
        left = right = combined = math.nan
    else:
        left, right, combined = coherence(s)

    sc: Optional[float] = None
    if normalize_rows or rows_are_unit_norm(a):
        sc = attempt("self_cluster", lambda: self_cluster(a))

    if failures:
        raise UndefinedMetricError(failures)

    return MetricReport(
        n=s.n,
        d=s.d,
        rank=s.rank,
        alpha_req=alpha,
        rankme=entropy,
        rankme_star=entropy_star,
        nesum=ne,
        stable_rank=srank,
        cond_number=cond,
        cond_on_truncated_spectrum=bool(s.rank < min(s.n, s.d)),
        coherence_left=left,
        coherence_right=right,
        coherence=combined,
        self_cluster=sc,
    )
