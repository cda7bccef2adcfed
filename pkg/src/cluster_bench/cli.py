"""cluster-bench command line interface.

Exit codes: 0 success, 1 usage error, 2 input-data error, 3 runtime failure.
All sweep state comes from flags or a --config JSON file (flags win); no
environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import EmbeddingParseError
from .metrics import NoisePolicy
from .sweep import (
    ALGORITHMS,
    EmbeddingSource,
    SweepConfig,
    emit_report,
    parse_report,
    run_sweep,
    select_best,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1.
    def error(self, message):
        raise _UsageError(message)


def _int_range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    return list(range(int(lo), int(hi) + 1))


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def build_parser():
    parser = _Parser(prog="cluster-bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a hyperparameter sweep and emit a report")
    sweep.add_argument("--config", type=Path, help="JSON file with SweepConfig fields")
    sweep.add_argument("--algorithm", choices=ALGORITHMS)
    sweep.add_argument("--embeddings", help="comma-separated embedding CSV paths")
    sweep.add_argument("--labels", choices=("5", "3", "both"), dest="label_scheme")
    sweep.add_argument("--k-range", type=_int_range, metavar="A:B",
                       help="n_clusters grid for kmeans/single_linkage (inclusive)")
    sweep.add_argument("--eps", type=_float_list, metavar="LIST",
                       help="comma-separated eps grid for dbscan")
    sweep.add_argument("--min-cluster-size", type=_int_list, metavar="LIST",
                       help="comma-separated min_cluster_size grid for hdbscan")
    sweep.add_argument("--seeds", type=_int_range, metavar="A:B",
                       help="inclusive seed range for kmeans")
    sweep.add_argument("--out", type=Path, help="report output path")
    sweep.add_argument("--format", choices=("csv", "json"), dest="output_format")
    sweep.add_argument("--noise-policy", choices=("exclude", "as-cluster"))
    sweep.add_argument("--jobs", type=int, help="parallel workers (default 1)")

    best = sub.add_parser("best", help="pick the best grid point from a report")
    best.add_argument("--report", type=Path, required=True)
    best.add_argument("--metric", required=True,
                      choices=("silhouette", "ari", "purity",
                               "ari_5", "ari_3", "purity_5", "purity_3"))
    return parser


_GRID_FLAG = {
    "kmeans": "k_range",
    "single_linkage": "k_range",
    "dbscan": "eps",
    "hdbscan": "min_cluster_size",
}


def _sweep_config(args):
    base = {}
    if args.config is not None:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))

    if args.algorithm is not None:
        base["algorithm"] = args.algorithm
    if "algorithm" not in base:
        raise _UsageError("--algorithm is required (flag or config file)")
    algorithm = base["algorithm"]

    for flag, dest in (("--k-range", "k_range"), ("--eps", "eps"),
                       ("--min-cluster-size", "min_cluster_size")):
        supplied = getattr(args, dest) is not None
        if supplied and dest != _GRID_FLAG.get(algorithm):
            raise _UsageError(f"{flag} does not apply to algorithm {algorithm!r}")
    grid = getattr(args, _GRID_FLAG[algorithm])
    if grid is not None:
        base["grid"] = grid

    if args.embeddings is not None:
        base["embeddings"] = [p for p in args.embeddings.split(",") if p]
    if args.label_scheme is not None:
        base["label_scheme"] = args.label_scheme
    if args.seeds is not None:
        base["seeds"] = args.seeds
    if args.out is not None:
        base["output_path"] = str(args.out)
    if args.output_format is not None:
        base["output_format"] = args.output_format
    if args.noise_policy is not None:
        base["noise_policy"] = {
            "exclude": NoisePolicy.EXCLUDE_NOISE.value,
            "as-cluster": NoisePolicy.NOISE_AS_CLUSTER.value,
        }[args.noise_policy]
    if args.jobs is not None:
        base["jobs"] = args.jobs

    if not base.get("embeddings"):
        raise _UsageError("--embeddings is required (flag or config file)")
    if not base.get("output_path"):
        raise _UsageError("--out is required (flag or config file)")
    try:
        return SweepConfig.from_dict(base)
    except (ValueError, KeyError) as exc:
        raise _UsageError(str(exc)) from exc


def _cmd_sweep(args):
    config = _sweep_config(args)
    for source in config.embeddings:
        if not Path(source.path).is_file():
            print(f"cluster-bench: embedding file not found: {source.path}", file=sys.stderr)
            return EXIT_INPUT
    try:
        report = run_sweep(config)
    except EmbeddingParseError as exc:
        print(f"cluster-bench: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit_report(report, config.output_path, config.output_format)
    print(f"[cluster-bench] report written to {config.output_path}", file=sys.stderr)
    return EXIT_OK


def _format_value(value):
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _cmd_best(args):
    try:
        report = parse_report(args.report)
    except FileNotFoundError:
        print(f"cluster-bench: report not found: {args.report}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"cluster-bench: unreadable report: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        records = select_best(report, args.metric)
    except ValueError as exc:
        print(f"cluster-bench: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for record in records:
        print(
            f"{record.algorithm} {record.embedding} "
            f"{record.param}={_format_value(record.value)} "
            f"{args.metric}={record.score!r}"
        )
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"cluster-bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_best(args)
    except _UsageError as exc:
        print(f"cluster-bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"cluster-bench: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # runtime failure: report and exit 3
        print(f"cluster-bench: unexpected failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
