/**
 * Node bindings for the embq embedding-quality toolkit.
 *
 * The binding hands matrices to the core through its RAWF64 file format and
 * CLI, and returns the values parsed from the core's JSON envelopes. All
 * numerical truth lives on the core side; nothing is recomputed here.
 */

import { DenseMatrix, MatrixInput, encodeNpy, encodeRawf64, toDenseMatrix } from "./matrix.js";
import { RunnerOptions, runCli, runForEnvelope, withTempDir, writeTempFile } from "./runner.js";

export { DenseMatrix, MatrixInput, encodeNpy, encodeRawf64, toDenseMatrix } from "./matrix.js";
export { EmbqError, RunnerOptions } from "./runner.js";

export interface MetricReport {
    n: number;
    d: number;
    rank: number;
    alpha_req: number;
    rankme: number;
    rankme_star: number;
    nesum: number;
    stable_rank: number;
    cond_number: number;
    cond_on_truncated_spectrum: boolean;
    coherence_left: number;
    coherence_right: number;
    coherence: number;
    self_cluster: number | null;
}

export interface EvaluateOptions extends RunnerOptions {
    /** Scale rows to unit norm first (enables self_cluster). */
    normalizeRows?: boolean;
    /** Center columns before the covariance spectrum (default true). */
    center?: boolean;
}

/** Full metric report for an in-memory matrix. */
export function evaluate(data: MatrixInput, opts: EvaluateOptions = {}): MetricReport {
    const m = toDenseMatrix(data);
    return withTempDir((dir) => {
        const path = writeTempFile(dir, "matrix.raw", encodeRawf64(m));
        const args = ["metrics", "--input", path, "--format", "raw"];
        if (opts.normalizeRows) args.push("--normalize-rows");
        if (opts.center === false) args.push("--no-center");
        return runForEnvelope(args, opts).payload as MetricReport;
    });
}

export interface StabilityOptions extends RunnerOptions {
    metric: string;
    batches: number[];
    trials?: number;
    seed?: number;
}

export interface StabilityProfile {
    metric_name: string;
    full_value: number;
    batch_sizes: number[];
    mean_factor: (number | null)[];
    lower_bound_rate: (number | null)[];
    failures: number[];
    trials: number;
    seed: number;
    bound_verdict: string;
    min_batch_for_factor: Record<string, number | null>;
}

/** Subsampling-stability profile of one metric on an in-memory matrix. */
export function stabilityProfile(data: MatrixInput, opts: StabilityOptions): StabilityProfile {
    const m = toDenseMatrix(data);
    return withTempDir((dir) => {
        const path = writeTempFile(dir, "matrix.raw", encodeRawf64(m));
        const args = [
            "stability",
            "--input", path,
            "--format", "raw",
            "--metric", opts.metric,
            "--batches", opts.batches.join(","),
            "--trials", String(opts.trials ?? 20),
            "--seed", String(opts.seed ?? 0),
        ];
        return runForEnvelope(args, opts).payload as StabilityProfile;
    });
}

/** Spearman rank correlation between two equal-length value lists. */
export function spearman(x: number[], y: number[], opts: RunnerOptions = {}): number {
    if (!Array.isArray(x) || !Array.isArray(y)) {
        throw new TypeError("spearman takes two arrays of numbers");
    }
    return withTempDir((dir) => {
        const xs = writeTempFile(dir, "x.txt", x.map((v) => String(v)).join("\n") + "\n");
        const ys = writeTempFile(dir, "y.txt", y.map((v) => String(v)).join("\n") + "\n");
        const envelope = runForEnvelope(
            ["correlate", "--metric-values", xs, "--accuracies", ys],
            opts,
        );
        return (envelope.payload as { rho: number }).rho;
    });
}

/** Core version string, e.g. "0.1.0"; matches this package's version. */
export function version(opts: RunnerOptions = {}): string {
    return runCli(["--version"], opts).trim().replace(/^embq\s+/, "");
}
