"""Label-free embedding quality evaluation.

Seven spectral/geometric quality metrics on embedding matrices, subsampling
stability and correlation analyses, and controlled graph-degradation
experiments. See the `embq` CLI for the file-based surface and
`embq.estimators` for scikit-learn style wrappers (imported lazily to keep
CLI startup light).
"""

from .analysis import (
    CorrelationReport,
    StabilityProfile,
    correlate_experiment,
    min_batch_for_factor,
    spearman,
    stability_profile,
    subsample_rows,
)
from .core import (
    CovarianceSpectrum,
    DataError,
    DomainError,
    Spectrum,
    check_matrix,
    compute_covariance_spectrum,
    compute_spectrum,
    gram_dxd,
    normalize_rows,
)
from .metrics import (
    MetricReport,
    UndefinedMetricError,
    alpha_req,
    coherence,
    cond_number,
    full_report,
    nesum,
    rankme,
    rankme_star,
    self_cluster,
    stable_rank,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationReport",
    "CovarianceSpectrum",
    "DataError",
    "DomainError",
    "MetricReport",
    "Spectrum",
    "StabilityProfile",
    "UndefinedMetricError",
    "__version__",
    "alpha_req",
    "check_matrix",
    "coherence",
    "compute_covariance_spectrum",
    "compute_spectrum",
    "cond_number",
    "correlate_experiment",
    "full_report",
    "gram_dxd",
    "min_batch_for_factor",
    "nesum",
    "normalize_rows",
    "rankme",
    "rankme_star",
    "self_cluster",
    "spearman",
    "stability_profile",
    "stable_rank",
    "subsample_rows",
]
