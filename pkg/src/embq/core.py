"""Embedding-matrix validation and the spectral decompositions every metric consumes.

An embedding matrix is an n x d float64 array whose rows are sample
representations. All public operations are pure functions and validate
their input through :func:`check_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Invalid input data: bad shapes, non-finite values, malformed files."""


class DomainError(ValueError):
    """Operation mathematically undefined on this input (zero matrix, rank too low, ...)."""


def check_matrix(x, name: str = "matrix") -> np.ndarray:
    """Validate `x` as an n x d embedding matrix and return it as float64.

    Rejects non-2-D input, empty axes, and non-finite entries; the error for
    a non-finite entry names the first offending (row, col).
    """
    try:
        a = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DataError(f"{name} is not numeric: {exc}") from exc
    if a.ndim != 2:
        raise DataError(f"{name} must be 2-D, got {a.ndim}-D with shape {a.shape}")
    n, d = a.shape
    if n < 1 or d < 1:
        raise DataError(f"{name} must have n >= 1 rows and d >= 1 columns, got {n} x {d}")
    finite = np.isfinite(a)
    if not finite.all():
        r, c = np.argwhere(~finite)[0]
        raise DataError(
            f"{name} has non-finite entry {a[r, c]!r} at (row {int(r)}, col {int(c)})"
        )
    return a


@dataclass(frozen=True)
class Spectrum:
    """Singular spectrum of a matrix: the single source for all spectral metrics.

    Attributes:
        sigma: descending singular values, length min(n, d).
        left_row_norms: squared row norms of the rank-r left singular block,
            length n; sums to `rank`.
        right_row_norms: squared row norms of the rank-r right singular block,
            length d; sums to `rank`.
        rank: number of singular values above `tol`.
        tol: absolute cutoff max(n, d) * sigma[0] * eps(float64).
    """

    sigma: np.ndarray
    left_row_norms: np.ndarray
    right_row_norms: np.ndarray
    rank: int
    tol: float

    @property
    def n(self) -> int:
        return int(self.left_row_norms.shape[0])

    @property
    def d(self) -> int:
        return int(self.right_row_norms.shape[0])


@dataclass(frozen=True)
class CovarianceSpectrum:
    """Descending, non-negative eigenvalues of the d x d column covariance."""

    lam: np.ndarray


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD factors with the package-wide numerical-rank tolerance."""

    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray
    rank: int
    tol: float


def svd_tolerance(n: int, d: int, sigma_max: float) -> float:
    """Absolute singular-value cutoff: max(n, d) * sigma_max * eps(float64)."""
    if sigma_max == 0.0:
        return 0.0
    return max(n, d) * float(sigma_max) * float(np.finfo(np.float64).eps)


def thin_svd(x) -> SvdFactors:
    """Thin SVD of `x` with tolerance-based numerical rank.

    Singular values are clamped at 0 and values at or below the tolerance
    are zeroed outright: they are solver noise, and treating them as exact
    zeros keeps entropy-style metrics exactly 0 on collapsed input. A zero
    matrix gets rank 0 and tol 0.
    """
    a = check_matrix(x)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    s = np.maximum(s, 0.0)
    tol = svd_tolerance(a.shape[0], a.shape[1], float(s[0]))
    rank = int(np.count_nonzero(s > tol))
    s[rank:] = 0.0
    return SvdFactors(u=u, sigma=s, vt=vt, rank=rank, tol=tol)


def compute_spectrum(x) -> Spectrum:
    """Reconstruction-grade singular spectrum of an embedding matrix."""
    f = thin_svd(x)
    r = f.rank
    left = np.einsum("ij,ij->i", f.u[:, :r], f.u[:, :r])
    right = np.einsum("ij,ij->j", f.vt[:r, :], f.vt[:r, :])
    return Spectrum(
        sigma=f.sigma,
        left_row_norms=left,
        right_row_norms=right,
        rank=r,
        tol=f.tol,
    )


def compute_covariance_spectrum(x, center: bool = True) -> CovarianceSpectrum:
    """Eigenvalues of (1/n) Xc' Xc, descending and clamped at 0.

    Xc is `x` with column means removed when `center` is set (the default).
    The covariance is formed through the d x d Gram product, so cost is
    O(n d^2) regardless of n; the divisor is n (population convention).
    """
    a = check_matrix(x)
    if center:
        a = a - a.mean(axis=0, keepdims=True)
    c = (a.T @ a) / a.shape[0]
    c = (c + c.T) / 2.0
    lam = np.linalg.eigvalsh(c)[::-1]
    return CovarianceSpectrum(lam=np.maximum(lam, 0.0))


def normalize_rows(x) -> np.ndarray:
    """Scale each row to unit Euclidean norm.

    Rows whose norm is already within 1e-12 of 1 pass through bit-for-bit;
    zero rows are rejected because their direction is undefined.
    """
    a = check_matrix(x)
    norms = np.linalg.norm(a, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DomainError(f"cannot normalize zero row at index {int(zero[0])}")
    scale = np.where(np.abs(norms - 1.0) <= 1e-12, 1.0, norms)
    return a / scale[:, None]


def gram_dxd(x) -> np.ndarray:
    """Return the d x d Gram matrix X' X, symmetrized against round-off.

    The squared Frobenius norm of X X' equals that of X' X, which lets the
    pairwise-similarity statistics run in O(n d^2) instead of O(n^2 d).
    """
    a = check_matrix(x)
    g = a.T @ a
    return (g + g.T) / 2.0
