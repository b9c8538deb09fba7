"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. The heavy criteria (oracle equivalence, the end-to-end experiment)
carry their stated runtime budgets as assertions.
"""

import json
import math
import time

import numpy as np
import pytest

from embq import metrics as M
from embq import probe
from embq.analysis import spearman, stability_profile
from embq.cli import main
from embq.core import (
    compute_covariance_spectrum,
    compute_spectrum,
    normalize_rows,
    svd_tolerance,
)
from embq.datagen import (
    Graph,
    SbmParams,
    edge_budget,
    gen_clustered,
    gen_collapsed,
    gen_sphere,
    is_connected,
    sbm_generate,
    sparsify_connected,
    sparsify_naive,
)
from embq import io as eio

import oracles
from test_core import random_orthogonal
from test_metrics import spectrum_from_sigma


def _verdict(name: str, ok: bool) -> bool:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    return ok


def _production_metrics(a):
    s = compute_spectrum(a)
    cs = compute_covariance_spectrum(a)
    left, right, combined = M.coherence(s)
    return {
        "alpha_req": M.alpha_req(s),
        "rankme": M.rankme(s),
        "rankme_star": M.rankme_star(s),
        "nesum": M.nesum(cs),
        "stable_rank": M.stable_rank(s),
        "cond_number": M.cond_number(s),
        "coherence_left": left,
        "coherence_right": right,
        "coherence": combined,
        "self_cluster": M.self_cluster(normalize_rows(a)),
    }


def test_oracle_equivalence_100_matrices():
    """Every metric matches the brute-force route to rel 1e-8 on 100 matrices in < 30 s."""
    rng = np.random.default_rng(20240817)
    t0 = time.monotonic()
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(8, 129))
        d = int(rng.integers(2, 33))
        a = rng.standard_normal((n, d))
        got = _production_metrics(a)
        want = oracles.oracle_metrics(a)
        for key, ref in want.items():
            rel = abs(got[key] - ref) / max(abs(got[key]), abs(ref))
            worst = max(worst, rel)
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-8 and elapsed < 30.0
    assert _verdict(
        f"oracle equivalence (worst rel {worst:.2e}, {elapsed:.1f} s)", ok
    )


def test_self_cluster_gram_trick_and_large_scale():
    """Gram-trick value equals the explicit pairwise loop (rel 1e-10, n <= 512)
    and the O(n d^2) path evaluates n = 100000, d = 128 in < 10 s."""
    rng = np.random.default_rng(81)
    ok = True
    for n, d in [(64, 8), (256, 16), (512, 32)]:
        w = normalize_rows(rng.standard_normal((n, d)))
        q = oracles.pairwise_gram_sq_frobenius(w)
        want = (d * q - n * (d + n - 1)) / ((d - 1) * (n - 1) * n)
        got = M.self_cluster(w)
        ok = ok and abs(got - want) <= 1e-10 * max(abs(want), abs(got))
    big = gen_sphere(100_000, 128, seed=5)
    t0 = time.monotonic()
    value = M.self_cluster(big)
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 10.0 and math.isfinite(value)
    assert _verdict(
        f"self_cluster gram trick + 100000x128 in {elapsed:.2f} s", ok
    )


def test_sphere_centering():
    """gen_sphere(2048, 64) over 20 seeds: mean self_cluster within +/-0.01 of 0."""
    values = [M.self_cluster(gen_sphere(2048, 64, seed=s)) for s in range(20)]
    mean = float(np.mean(values))
    ok = abs(mean) <= 0.01
    assert _verdict(f"sphere centering (mean {mean:+.2e})", ok)


def test_collapse_detection():
    """gen_collapsed(4096, 64, k) reports rank k exactly; rankme_star strictly increases."""
    stars = []
    ok = True
    for k in (1, 8, 32, 64):
        x = gen_collapsed(4096, 64, live_dims=k, seed=k)
        s = compute_spectrum(x)
        ok = ok and s.rank == k
        stars.append(M.rankme_star(s))
    ok = ok and all(b > a for a, b in zip(stars, stars[1:]))
    assert _verdict(
        "collapse detection (ranks exact, rankme_star "
        + " < ".join(f"{v:.3f}" for v in stars)
        + ")",
        ok,
    )


def test_exact_power_law_recovery():
    """sigma_i = i^-alpha for alpha in {0.5, 1.0, 2.0}: |estimate - alpha| <= 1e-6."""
    ok = True
    for alpha in (0.5, 1.0, 2.0):
        i = np.arange(1, 101, dtype=np.float64)
        s = spectrum_from_sigma(i**-alpha, n=128, d=100)
        ok = ok and abs(M.alpha_req(s) - alpha) <= 1e-6
    assert _verdict("exact power-law recovery (alpha 0.5/1.0/2.0)", ok)


def _scale_free_vector(a):
    s = compute_spectrum(a)
    cs = compute_covariance_spectrum(a)
    left, right, combined = M.coherence(s)
    return np.array(
        [
            M.alpha_req(s),
            M.rankme(s),
            M.rankme_star(s),
            M.nesum(cs),
            M.stable_rank(s),
            M.cond_number(s),
            left,
            right,
            combined,
        ]
    )


def test_invariance_suite():
    """Scale (1e-3, 1, 1e3), row permutation, right rotation: 20 instances each, tol 1e-8."""
    rng = np.random.default_rng(82)
    ok = True
    for _ in range(20):
        a = rng.standard_normal((40, 12))
        base = _scale_free_vector(a)
        for c in (1e-3, 1.0, 1e3):
            diff = np.abs(_scale_free_vector(c * a) - base) / np.maximum(np.abs(base), 1.0)
            ok = ok and float(diff.max()) <= 1e-8

    for _ in range(20):
        a = normalize_rows(rng.standard_normal((40, 12)))
        perm = rng.permutation(40)
        base = np.append(_scale_free_vector(a), M.self_cluster(a))
        got = np.append(_scale_free_vector(a[perm]), M.self_cluster(a[perm]))
        diff = np.abs(got - base) / np.maximum(np.abs(base), 1.0)
        ok = ok and float(diff.max()) <= 1e-8

    keep = [0, 1, 2, 3, 4, 5, 6]  # everything except right/combined coherence
    for _ in range(20):
        a = normalize_rows(rng.standard_normal((40, 12)))
        q = random_orthogonal(12, rng)
        base = np.append(_scale_free_vector(a)[keep], M.self_cluster(a))
        got = np.append(_scale_free_vector(a @ q)[keep], M.self_cluster(a @ q))
        diff = np.abs(got - base) / np.maximum(np.abs(base), 1.0)
        ok = ok and float(diff.max()) <= 1e-8
    assert _verdict("invariance suite (scale / permutation / rotation)", ok)


def test_probe_loss_identity_100_instances():
    """Achieved MSE equals |Y|_F^2 - |U_r' Y|_F^2 within 1e-8 on 100 instances."""
    rng = np.random.default_rng(83)
    ok = True
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(10, 60))
        d = int(rng.integers(2, 12))
        a = rng.standard_normal((n, d))
        if i % 3 == 0 and d >= 3:
            a[:, -1] = a[:, 0] + a[:, 1]  # make some instances rank-deficient
        c = int(rng.integers(2, 5))
        y = probe.one_hot_labels(rng.integers(0, c, size=n), c)
        w = probe.fit(a, y)
        got = probe.mse_loss(w, a, y)

        u, sigma, _ = oracles.jacobi_svd(a)
        tol = svd_tolerance(n, d, float(sigma[0]))
        r = int(np.count_nonzero(sigma > tol))
        want = float((y * y).sum()) - float(((u[:, :r].T @ y) ** 2).sum())
        worst = max(worst, abs(got - want))
        ok = ok and abs(got - want) <= 1e-8
    assert _verdict(f"probe loss identity (worst abs diff {worst:.2e})", ok)


def test_rankme_lower_bound_on_clustered_data():
    """Clustered 16384x128, batches 128..8192, 20 trials: lower-bound rate >= 0.95
    everywhere and mean factor non-decreasing."""
    a = gen_clustered(16384, 128, k=32, spread=0.25, seed=1234)
    prof = stability_profile(
        a, "rankme", [128, 256, 512, 1024, 2048, 4096, 8192], trials=20, seed=99
    )
    rates_ok = all(r is not None and r >= 0.95 for r in prof.lower_bound_rate)
    factors = prof.mean_factor
    mono_ok = all(f is not None for f in factors) and all(
        b >= x for x, b in zip(factors, factors[1:])
    )
    ok = rates_ok and mono_ok and prof.failures == [0] * 7
    assert _verdict(
        f"rankme lower bound (min rate {min(prof.lower_bound_rate):.2f}, verdict {prof.bound_verdict})",
        ok,
    )


def _random_connected_graph(rng) -> Graph:
    while True:
        n = int(rng.integers(30, 121))
        p = 6.0 / n
        seed = int(rng.integers(0, 2**31))
        g, _ = sbm_generate(SbmParams(blocks=(n,), p_in=p, p_out=p, seed=seed))
        if g.m >= 2 * n and is_connected(g):
            return g


def test_sparsifier_contracts_50_graphs():
    """Both modes emit exactly T = round(n * degree / 2) edges on 50 random
    connected graphs; connected mode stays connected; naive mode disconnects
    at least once at degree 1.1."""
    rng = np.random.default_rng(84)
    ok = True
    naive_disconnected = 0
    for i in range(50):
        g = _random_connected_graph(rng)
        t = edge_budget(g.n, 4.0)
        nv = sparsify_naive(g, 4.0, seed=i)
        cv = sparsify_connected(g, 4.0, seed=i)
        ok = ok and nv.m == t and cv.m == t and is_connected(cv)
        thin = sparsify_naive(g, 1.1, seed=i)
        ok = ok and thin.m == edge_budget(g.n, 1.1)
        if not is_connected(thin):
            naive_disconnected += 1
    ok = ok and naive_disconnected >= 1
    assert _verdict(
        f"sparsifier contracts (naive disconnected {naive_disconnected}/50 at degree 1.1)", ok
    )


@pytest.mark.slow
def test_end_to_end_experiment_analogue(tmp_path):
    """SBM 4x250, degrees 1.1..10 in 8 steps, 10 embeddings per cell: accuracy
    rises with degree under connected sparsification (rho >= 0.9 on 5 master
    seeds); full per-metric rho tables emitted; < 5 min."""
    t0 = time.monotonic()
    ok = True
    rhos = []
    for seed in range(5):
        out = tmp_path / f"exp_{seed}.json"
        code = main(
            [
                "experiment",
                "--sbm", "4x250,0.3,0.02",
                "--degrees", "1.1:10:8",
                "--embeds", "10",
                "--probes", "10",
                "--dim", "16",
                "--seed", str(seed),
                "--json", str(out),
            ]
        )
        ok = ok and code == 0
        env = json.loads(out.read_text())
        payload = env["payload"]

        cells = [c for c in payload["grid"] if c["mode"] == "connected" and c["feasible"]]
        degrees = [c["target_degree"] for c in cells]
        accs = [c["mean_accuracy"] for c in cells]
        rho = spearman(degrees, accs)
        rhos.append(rho)
        ok = ok and rho >= 0.9

        for mode in ("naive", "connected"):
            table = payload["metric_accuracy_spearman"][mode]
            ok = ok and set(table) == {
                "alpha_req", "rankme", "rankme_star", "nesum",
                "stable_rank", "cond_number", "coherence", "self_cluster",
            }
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 300.0
    assert _verdict(
        f"end-to-end experiment (rho {', '.join(f'{r:.2f}' for r in rhos)}; {elapsed:.0f} s)",
        ok,
    )


def test_determinism_byte_identical_json(tmp_path):
    """Every randomized command with a fixed seed emits byte-identical output
    across two consecutive runs."""
    ok = True

    mat = tmp_path / "m.npy"
    eio.write_npy(mat, np.random.default_rng(85).standard_normal((256, 16)))
    outputs = []
    for run in range(2):
        out = tmp_path / f"stab_{run}.json"
        code = main(
            ["stability", "--input", str(mat), "--metric", "rankme",
             "--batches", "32,64,128", "--trials", "5", "--seed", "7",
             "--json", str(out)]
        )
        ok = ok and code == 0
        outputs.append(out.read_bytes())
    ok = ok and outputs[0] == outputs[1]

    g, _ = sbm_generate(SbmParams(blocks=(40,), p_in=0.3, p_out=0.3, seed=3))
    gpath = tmp_path / "g.txt"
    eio.write_graph(gpath, g)
    graph_outputs = []
    for run in range(2):
        out = tmp_path / f"sparse_{run}.txt"
        code = main(
            ["sparsify", "--graph", str(gpath), "--mode", "naive",
             "--target-degree", "3.0", "--seed", "11", "--out", str(out)]
        )
        ok = ok and code == 0
        graph_outputs.append(out.read_bytes())
    ok = ok and graph_outputs[0] == graph_outputs[1]

    exp_outputs = []
    for run in range(2):
        out = tmp_path / f"exp_{run}.json"
        code = main(
            ["experiment", "--sbm", "3x30,0.3,0.05", "--degrees", "2:6:3",
             "--embeds", "2", "--probes", "3", "--dim", "6", "--seed", "13",
             "--json", str(out)]
        )
        ok = ok and code == 0
        exp_outputs.append(out.read_bytes())
    ok = ok and exp_outputs[0] == exp_outputs[1]

    assert _verdict("determinism (stability / sparsify / experiment)", ok)
