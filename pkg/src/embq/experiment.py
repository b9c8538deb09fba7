"""Degradation-experiment grid: sparsify a synthetic graph, embed, probe, correlate.

For every (mode, target degree) cell the graph is sparsified and embedded
`embeds` times; each embedding is scored by the closed-form probe on
held-out rows over `probes` seeded 80/20 splits, and all metrics are
averaged across embeddings. Per mode, each metric's Spearman correlation
against mean accuracy is reported over the degree schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import metrics, probe
from .analysis import METRIC_NAMES, shuffle_split_indices, spearman
from .core import DataError, DomainError, compute_covariance_spectrum, compute_spectrum, normalize_rows
from .datagen import SbmParams, edge_budget, sbm_generate, sparsify_connected, sparsify_naive, spectral_embed
from .rng import check_seed, child_seed

MODES = ("naive", "connected")

TRAIN_FRACTION = 0.8


@dataclass(frozen=True)
class ExperimentConfig:
    blocks: tuple[int, ...]
    p_in: float
    p_out: float
    degrees: tuple[float, ...]
    embeds: int
    probes: int
    dim: int
    seed: int

    def __post_init__(self):
        check_seed(self.seed)
        if self.embeds < 1 or self.probes < 1:
            raise DataError("embeds and probes must be >= 1")
        if not self.degrees:
            raise DataError("need at least one target degree")


def matrix_metrics(x) -> dict[str, Optional[float]]:
    """All metric values for a matrix, with None where a metric is undefined.

    self_cluster is evaluated on a row-normalized copy, per its unit-norm
    precondition; the spectral metrics see the raw matrix.
    """
    s = compute_spectrum(x)
    cs = compute_covariance_spectrum(x)
    out: dict[str, Optional[float]] = {}

    def attempt(fn):
        try:
            return fn()
        except DomainError:
            return None

    out["alpha_req"] = attempt(lambda: metrics.alpha_req(s))
    out["rankme"] = attempt(lambda: metrics.rankme(s))
    out["rankme_star"] = attempt(lambda: metrics.rankme_star(s))
    out["nesum"] = metrics.nesum(cs)
    out["stable_rank"] = attempt(lambda: metrics.stable_rank(s))
    out["cond_number"] = attempt(lambda: metrics.cond_number(s))
    out["coherence"] = attempt(lambda: metrics.coherence(s)[2])
    out["self_cluster"] = attempt(lambda: metrics.self_cluster(normalize_rows(x)))
    return out


def _probe_accuracy(x: np.ndarray, labels: np.ndarray, n_probes: int, seed: int) -> float:
    """Mean held-out accuracy over seeded shuffle splits."""
    y = probe.one_hot_labels(labels)
    accs = []
    for p in range(n_probes):
        train, test = shuffle_split_indices(x.shape[0], TRAIN_FRACTION, child_seed(seed, p))
        w = probe.fit(x[train], y[train])
        accs.append(probe.predict_accuracy(w, x[test], y[test]))
    return float(np.mean(accs))


def _mean_or_none(values: list[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run the full grid and return the JSON-ready payload.

    Cells whose edge budget is infeasible for their mode (below the
    spanning-tree size in connected mode, or above the available edges) are
    emitted with feasible = false and null values; correlations use the
    feasible cells only.
    """
    graph, labels = sbm_generate(
        SbmParams(blocks=cfg.blocks, p_in=cfg.p_in, p_out=cfg.p_out, seed=child_seed(cfg.seed, 0))
    )
    n = graph.n

    grid = []
    accuracy_by_mode: dict[str, list[Optional[float]]] = {m: [] for m in MODES}
    metrics_by_mode: dict[str, dict[str, list[Optional[float]]]] = {
        m: {name: [] for name in METRIC_NAMES} for m in MODES
    }

    for mode_i, mode in enumerate(MODES):
        sparsify = sparsify_naive if mode == "naive" else sparsify_connected
        for deg_i, degree in enumerate(cfg.degrees):
            budget = edge_budget(n, degree)
            feasible = budget <= graph.m and (mode == "naive" or budget >= n - 1)
            cell = {
                "mode": mode,
                "target_degree": float(degree),
                "edge_budget": budget,
                "feasible": feasible,
                "mean_accuracy": None,
                "metrics": {name: None for name in METRIC_NAMES},
            }
            if not feasible:
                grid.append(cell)
                accuracy_by_mode[mode].append(None)
                for name in METRIC_NAMES:
                    metrics_by_mode[mode][name].append(None)
                continue

            accs = []
            metric_values: dict[str, list[Optional[float]]] = {name: [] for name in METRIC_NAMES}
            for e in range(cfg.embeds):
                sparse = sparsify(graph, degree, child_seed(cfg.seed, 1, mode_i, deg_i, e))
                x = spectral_embed(sparse, cfg.dim)
                for name, value in matrix_metrics(x).items():
                    metric_values[name].append(value)
                accs.append(
                    _probe_accuracy(x, labels, cfg.probes, child_seed(cfg.seed, 2, mode_i, deg_i, e))
                )
            mean_acc = float(np.mean(accs))
            cell["mean_accuracy"] = mean_acc
            cell["metrics"] = {name: _mean_or_none(vals) for name, vals in metric_values.items()}
            grid.append(cell)
            accuracy_by_mode[mode].append(mean_acc)
            for name in METRIC_NAMES:
                metrics_by_mode[mode][name].append(cell["metrics"][name])

    correlations = {}
    accuracy_vs_degree = {}
    for mode in MODES:
        accs = accuracy_by_mode[mode]
        degs = list(cfg.degrees)
        valid = [i for i, a in enumerate(accs) if a is not None]
        rho_table = {}
        for name in METRIC_NAMES:
            vals = metrics_by_mode[mode][name]
            pts = [i for i in valid if vals[i] is not None]
            rho_table[name] = _guarded_spearman(
                [vals[i] for i in pts], [accs[i] for i in pts]
            )
        correlations[mode] = rho_table
        accuracy_vs_degree[mode] = _guarded_spearman(
            [degs[i] for i in valid], [accs[i] for i in valid]
        )

    return {
        "nodes": n,
        "edges": graph.m,
        "natural_degree": graph.average_degree,
        "classes": int(labels.max()) + 1,
        "grid": grid,
        "metric_accuracy_spearman": correlations,
        "accuracy_degree_spearman": accuracy_vs_degree,
    }


def _guarded_spearman(x: list, y: list) -> Optional[float]:
    if len(x) < 2:
        return None
    try:
        return spearman(x, y)
    except DomainError:
        return None
