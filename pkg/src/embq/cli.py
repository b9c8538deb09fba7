"""Command-line surface: file ingestion, the five subcommands, and JSON envelopes.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
input), 3 numerical-domain error (metric undefined on the input). stdout
carries only the JSON report; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, analysis, experiment, io, metrics
from .core import DataError, DomainError
from .datagen import sparsify_connected, sparsify_naive

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _envelope(payload_type: str, payload, input_info=None, options=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "input": input_info,
        "options": options or {},
        "payload_type": payload_type,
        "payload": payload,
    }


def _parse_batches(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise UsageError(f"--batches must be comma-separated integers, got {text!r}") from None


def _parse_sbm(text: str) -> tuple[tuple[int, ...], float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--sbm must be 'KxSIZE,p_in,p_out', got {text!r}")
    block_spec = parts[0].lower().split("x")
    try:
        if len(block_spec) == 2:
            k, size = int(block_spec[0]), int(block_spec[1])
            blocks = tuple([size] * k)
        else:
            raise ValueError
        p_in, p_out = float(parts[1]), float(parts[2])
    except ValueError:
        raise UsageError(f"--sbm must be 'KxSIZE,p_in,p_out', got {text!r}") from None
    return blocks, p_in, p_out


def _parse_degrees(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--degrees must be 'start:stop:steps', got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--degrees must be 'start:stop:steps', got {text!r}") from None
    if steps < 1:
        raise UsageError(f"--degrees needs at least 1 step, got {steps}")
    if steps == 1:
        return (start,)
    return tuple(start + (stop - start) * i / (steps - 1) for i in range(steps))


def build_parser() -> _Parser:
    parser = _Parser(prog="embq", description="Label-free embedding quality evaluation")
    parser.add_argument("--version", action="version", version=f"embq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_metrics = sub.add_parser("metrics", help="full metric report for one matrix")
    p_metrics.add_argument("--input", required=True, help="matrix file")
    p_metrics.add_argument("--format", choices=["auto", *io.MATRIX_FORMATS], default="auto")
    p_metrics.add_argument("--csv-header", action="store_true", help="CSV input has a header line")
    p_metrics.add_argument(
        "--normalize-rows", action="store_true",
        help="scale rows to unit norm first (enables self_cluster)",
    )
    p_metrics.add_argument(
        "--no-center", action="store_true",
        help="use the uncentered covariance for nesum (default: centered)",
    )
    p_metrics.add_argument("--json", help="write the report here instead of stdout")

    p_stab = sub.add_parser("stability", help="subsampling-stability profile of one metric")
    p_stab.add_argument("--input", required=True)
    p_stab.add_argument("--format", choices=["auto", *io.MATRIX_FORMATS], default="auto")
    p_stab.add_argument("--csv-header", action="store_true")
    p_stab.add_argument("--metric", required=True, choices=list(analysis.METRIC_NAMES))
    p_stab.add_argument("--batches", required=True, help="comma-separated batch sizes, e.g. 128,256,512")
    p_stab.add_argument("--trials", type=_pos_int, default=20)
    p_stab.add_argument("--seed", type=_nonneg_int, default=0)
    p_stab.add_argument("--json")

    p_corr = sub.add_parser("correlate", help="Spearman correlation of metric values vs accuracies")
    p_corr.add_argument("--metric-values", required=True, help="text file, one value per line")
    p_corr.add_argument("--accuracies", required=True, help="text file, one value per line")
    p_corr.add_argument("--name", default="metric", help="metric name echoed in the report")
    p_corr.add_argument("--json")

    p_sparse = sub.add_parser("sparsify", help="sparsify a graph to a target average degree")
    p_sparse.add_argument("--graph", required=True, help="graph text file ('n m' then 'u v' lines)")
    p_sparse.add_argument("--mode", required=True, choices=["naive", "connected"])
    p_sparse.add_argument("--target-degree", required=True, type=float)
    p_sparse.add_argument("--seed", type=_nonneg_int, default=0)
    p_sparse.add_argument("--out", required=True, help="output graph text file")

    p_exp = sub.add_parser("experiment", help="sparsify/embed/probe grid on a synthetic graph")
    p_exp.add_argument("--sbm", required=True, help="block model as 'KxSIZE,p_in,p_out'")
    p_exp.add_argument("--degrees", required=True, help="target degrees as 'start:stop:steps'")
    p_exp.add_argument("--embeds", type=_pos_int, default=10, help="embeddings per grid cell")
    p_exp.add_argument("--probes", type=_pos_int, default=100, help="probe splits per embedding")
    p_exp.add_argument("--dim", type=_pos_int, default=16, help="embedding dimension")
    p_exp.add_argument("--seed", type=_nonneg_int, default=0)
    p_exp.add_argument("--json")

    return parser


def _cmd_metrics(args) -> dict:
    fmt = io.resolve_format(args.input, args.format)
    a = io.read_matrix(args.input, fmt, csv_header=args.csv_header)
    report = metrics.full_report(a, center=not args.no_center, normalize_rows=args.normalize_rows)
    return _envelope(
        "metric_report",
        report.to_dict(),
        input_info={"path": args.input, "format": fmt, "n": a.shape[0], "d": a.shape[1]},
        options={
            "normalize_rows": bool(args.normalize_rows),
            "center": not args.no_center,
            "seed": None,
        },
    )


def _cmd_stability(args) -> dict:
    fmt = io.resolve_format(args.input, args.format)
    a = io.read_matrix(args.input, fmt, csv_header=args.csv_header)
    profile = analysis.stability_profile(
        a, args.metric, _parse_batches(args.batches), args.trials, args.seed
    )
    payload = {
        "metric_name": profile.metric_name,
        "full_value": profile.full_value,
        "batch_sizes": profile.batch_sizes,
        "mean_factor": profile.mean_factor,
        "lower_bound_rate": profile.lower_bound_rate,
        "failures": profile.failures,
        "trials": profile.trials,
        "seed": profile.seed,
        "bound_verdict": profile.bound_verdict,
        "min_batch_for_factor": {
            str(t): analysis.min_batch_for_factor(profile, t) for t in analysis.FACTOR_THRESHOLDS
        },
    }
    return _envelope(
        "stability_profile",
        payload,
        input_info={"path": args.input, "format": fmt, "n": a.shape[0], "d": a.shape[1]},
        options={
            "metric": args.metric,
            "batches": profile.batch_sizes,
            "trials": args.trials,
            "seed": args.seed,
        },
    )


def _cmd_correlate(args) -> dict:
    values = io.read_value_series(args.metric_values)
    accs = io.read_value_series(args.accuracies)
    report = analysis.correlate_experiment(values, accs, metric_name=args.name)
    payload = {"metric_name": report.metric_name, "rho": report.rho, "pairs": report.pairs}
    return _envelope(
        "correlation_report",
        payload,
        input_info={"metric_values": args.metric_values, "accuracies": args.accuracies},
        options={},
    )


def _cmd_sparsify(args) -> None:
    g = io.read_graph(args.graph)
    sparsify = sparsify_naive if args.mode == "naive" else sparsify_connected
    out = sparsify(g, args.target_degree, args.seed)
    io.write_graph(args.out, out)
    print(
        f"wrote {out.m} edges (target degree {args.target_degree}) to {args.out}",
        file=sys.stderr,
    )


def _cmd_experiment(args) -> dict:
    blocks, p_in, p_out = _parse_sbm(args.sbm)
    degrees = _parse_degrees(args.degrees)
    try:
        cfg = experiment.ExperimentConfig(
            blocks=blocks,
            p_in=p_in,
            p_out=p_out,
            degrees=degrees,
            embeds=args.embeds,
            probes=args.probes,
            dim=args.dim,
            seed=args.seed,
        )
    except DataError as exc:
        raise UsageError(str(exc)) from exc
    payload = experiment.run_experiment(cfg)
    return _envelope(
        "experiment_grid",
        payload,
        input_info=None,
        options={
            "sbm": args.sbm,
            "degrees": list(degrees),
            "embeds": args.embeds,
            "probes": args.probes,
            "dim": args.dim,
            "seed": args.seed,
        },
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return int(exc.code or 0)
        if args.command == "sparsify":
            _cmd_sparsify(args)
            return EXIT_OK
        handlers = {
            "metrics": _cmd_metrics,
            "stability": _cmd_stability,
            "correlate": _cmd_correlate,
            "experiment": _cmd_experiment,
        }
        envelope = handlers[args.command](args)
        text = io.dumps_report(envelope)
        if getattr(args, "json", None):
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
            print(f"wrote report to {args.json}", file=sys.stderr)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except metrics.UndefinedMetricError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
