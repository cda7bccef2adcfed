"""Declarative grid sweeps over (algorithm x embedding x hyperparameter x seed).

A sweep loads each embedding file once, standardizes it, precomputes the
pairwise distances (and the dendrogram, for single linkage), then evaluates
every grid point. Grid points are independent jobs and may run on a thread
pool; rows are canonically sorted afterward so the worker count never
changes the report. Seeds apply to kmeans only; the other three algorithms
are deterministic.
"""

from __future__ import annotations

import json
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import (
    EmbeddingKind,
    LabelScheme,
    infer_kind_from_path,
    load_embeddings,
    standardize,
)
from .dbscan import DBSCAN
from .distance import pairwise_distances
from .hdbscan import HDBSCAN
from .kmeans import KMeans
from .metrics import (
    NoisePolicy,
    ScoreRecord,
    adjusted_rand_index,
    mean_and_sem,
    purity,
    silhouette,
)
from .results import count_noise
from .single_linkage import build_dendrogram, cut

ALGORITHMS = ("kmeans", "single_linkage", "dbscan", "hdbscan")

GRID_PARAM = {
    "kmeans": "n_clusters",
    "single_linkage": "n_clusters",
    "dbscan": "eps",
    "hdbscan": "min_cluster_size",
}

DEFAULT_GRIDS = {
    "kmeans": list(range(3, 20)),
    "single_linkage": list(range(3, 20)),
    "dbscan": [0.5, 1.0, 5.0, 10.0, 15.0],
    "hdbscan": [2, 5, 10, 15, 20],
}

DEFAULT_SEEDS = list(range(1, 51))
DBSCAN_MIN_SAMPLES = 5
KMEANS_MAX_ITER = 300

METRIC_FIELDS = (
    "n_clusters",
    "n_noise",
    "inertia",
    "silhouette",
    "ari_5",
    "purity_5",
    "ari_3",
    "purity_3",
)

LABEL_SCHEMES = ("5", "3", "both")


@dataclass(frozen=True)
class EmbeddingSource:
    path: str
    kind: EmbeddingKind | None = None

    def resolved_kind(self):
        return self.kind if self.kind is not None else infer_kind_from_path(self.path)

    def label(self):
        kind = self.resolved_kind()
        return kind.value if kind is not EmbeddingKind.OTHER else Path(self.path).stem


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs; defaults mirror the benchmark's grids."""

    algorithm: str
    embeddings: tuple
    label_scheme: str = "both"
    grid: tuple = ()
    seeds: tuple = ()
    noise_policy: NoisePolicy = NoisePolicy.EXCLUDE_NOISE
    jobs: int = 1
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.label_scheme not in LABEL_SCHEMES:
            raise ValueError(f"label_scheme must be one of {LABEL_SCHEMES}")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be 'csv' or 'json'")
        sources = tuple(
            s if isinstance(s, EmbeddingSource) else EmbeddingSource(str(s))
            for s in self.embeddings
        )
        if not sources:
            raise ValueError("at least one embedding file is required")
        labels = [s.label() for s in sources]
        if len(set(labels)) != len(labels):
            raise ValueError(
                f"embedding labels must be unique, got {labels}; "
                "rename the files or tag kinds explicitly"
            )
        object.__setattr__(self, "embeddings", sources)
        grid = tuple(self.grid) if self.grid else tuple(DEFAULT_GRIDS[self.algorithm])
        if not grid:
            raise ValueError("grid must be non-empty")
        object.__setattr__(self, "grid", grid)
        if self.algorithm == "kmeans":
            seeds = tuple(self.seeds) if self.seeds else tuple(DEFAULT_SEEDS)
            if not seeds:
                raise ValueError("kmeans needs a non-empty seed list")
        else:
            seeds = ()
        object.__setattr__(self, "seeds", seeds)
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "embeddings": [
                {"path": str(s.path), "kind": s.resolved_kind().value}
                for s in self.embeddings
            ],
            "label_scheme": self.label_scheme,
            "grid": list(self.grid),
            "seeds": list(self.seeds),
            "noise_policy": self.noise_policy.value,
            "jobs": self.jobs,
            "output_path": self.output_path,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        embeddings = tuple(
            EmbeddingSource(e["path"], EmbeddingKind(e["kind"]) if e.get("kind") else None)
            if isinstance(e, dict)
            else EmbeddingSource(str(e))
            for e in data.pop("embeddings", ())
        )
        policy = data.pop("noise_policy", None)
        kwargs = {
            k: data[k]
            for k in ("algorithm", "label_scheme", "grid", "seeds", "jobs",
                      "output_path", "output_format")
            if k in data
        }
        if policy is not None:
            kwargs["noise_policy"] = NoisePolicy(policy)
        return cls(embeddings=embeddings, **kwargs)


@dataclass(frozen=True)
class AggregateRecord:
    """Mean/SEM across seeds for one grid point; metrics missing everywhere stay None."""

    algorithm: str
    embedding: str
    param: str
    value: float
    means: dict
    sems: dict


@dataclass
class SweepReport:
    rows: list
    aggregates: list
    metadata: dict = field(default_factory=dict)


def _row_sort_key(record):
    seed = record.seed if isinstance(record, ScoreRecord) and record.seed is not None else -1
    is_aggregate = isinstance(record, AggregateRecord)
    return (record.algorithm, record.embedding, record.param, record.value, is_aggregate, seed)


class _Prepared:
    """Per-embedding artifacts shared (read-only) by all grid jobs."""

    def __init__(self, source, config):
        self.label = source.label()
        dataset = load_embeddings(source.path, kind=source.kind)
        dataset = standardize(dataset)
        self.dataset = dataset
        self.distances = pairwise_distances(dataset)
        self.dendrogram = (
            build_dendrogram(self.distances) if config.algorithm == "single_linkage" else None
        )
        self.truth = {}
        if config.label_scheme in ("5", "both"):
            self.truth["5"] = dataset.labels_for(LabelScheme.FIVE_CLASS)
        if config.label_scheme in ("3", "both"):
            self.truth["3"] = dataset.labels_for(LabelScheme.THREE_CLASS)


def _fit_task(prep, config, value, seed):
    if config.algorithm == "kmeans":
        model = KMeans(n_clusters=int(value), seed=int(seed), max_iter=KMEANS_MAX_ITER)
        model.fit(prep.dataset.matrix)
        return model.labels_, float(model.inertia_)
    if config.algorithm == "single_linkage":
        return cut(prep.dendrogram, int(value)).labels, None
    if config.algorithm == "dbscan":
        return DBSCAN(eps=float(value), min_samples=DBSCAN_MIN_SAMPLES).fit(prep.distances).labels_, None
    return HDBSCAN(min_cluster_size=int(value)).fit(prep.distances).labels_, None


def _score_task(prep, config, value, seed):
    labels, inertia_value = _fit_task(prep, config, value, seed)
    scores = {
        "silhouette": silhouette(prep.distances, labels, config.noise_policy),
        "inertia": inertia_value,
    }
    for scheme, truth in prep.truth.items():
        scores[f"ari_{scheme}"] = adjusted_rand_index(truth, labels)
        scores[f"purity_{scheme}"] = purity(truth, labels, config.noise_policy)
    mask = labels >= 0
    return ScoreRecord(
        algorithm=config.algorithm,
        embedding=prep.label,
        param=GRID_PARAM[config.algorithm],
        value=float(value),
        seed=int(seed) if seed is not None else None,
        n_clusters=int(np.unique(labels[mask]).size),
        n_noise=count_noise(labels),
        **scores,
    )


def _aggregate(rows):
    groups = {}
    for row in rows:
        groups.setdefault((row.algorithm, row.embedding, row.param, row.value), []).append(row)
    aggregates = []
    for (algorithm, embedding, param, value), group in sorted(groups.items()):
        means, sems = {}, {}
        for metric in METRIC_FIELDS:
            defined = [getattr(r, metric) for r in group if getattr(r, metric) is not None]
            if defined:
                means[metric], sems[metric] = mean_and_sem(defined)
            else:
                means[metric] = sems[metric] = None
        aggregates.append(
            AggregateRecord(
                algorithm=algorithm,
                embedding=embedding,
                param=param,
                value=value,
                means=means,
                sems=sems,
            )
        )
    return aggregates


def run_sweep(config):
    """Execute a sweep; deterministic for a fixed config regardless of jobs."""
    prepared = []
    for source in config.embeddings:
        print(f"[cluster-bench] loading {source.path}", file=sys.stderr)
        prepared.append(_Prepared(source, config))

    tasks = []
    for prep in prepared:
        for value in config.grid:
            if config.algorithm == "kmeans":
                tasks.extend((prep, value, seed) for seed in config.seeds)
            else:
                tasks.append((prep, value, None))

    progress = {"done": 0}
    lock = threading.Lock()

    def run_one(task):
        prep, value, seed = task
        record = _score_task(prep, config, value, seed)
        with lock:
            progress["done"] += 1
            done = progress["done"]
        if done % max(1, len(tasks) // 20) == 0 or done == len(tasks):
            print(f"[cluster-bench] {done}/{len(tasks)} evaluations", file=sys.stderr)
        return record

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(run_one, tasks))
    else:
        rows = [run_one(task) for task in tasks]

    rows.sort(key=_row_sort_key)
    aggregates = _aggregate(rows) if config.algorithm == "kmeans" else []
    metadata = {
        "tool": "cluster-bench",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config.to_dict(),
    }
    return SweepReport(rows=rows, aggregates=aggregates, metadata=metadata)


@dataclass(frozen=True)
class BestRecord:
    algorithm: str
    embedding: str
    param: str
    value: float
    score: float


def _resolve_metric(report, metric):
    if metric in ("silhouette", "ari_5", "ari_3", "purity_5", "purity_3"):
        return metric
    preferred = {"ari": ("ari_5", "ari_3"), "purity": ("purity_5", "purity_3")}
    if metric in preferred:
        for candidate in preferred[metric]:
            if any(getattr(r, candidate, None) is not None for r in report.rows):
                return candidate
        return preferred[metric][0]
    raise ValueError(f"unknown metric {metric!r}")


def select_best(report, metric):
    """Best grid point per (algorithm, embedding) by the aggregated metric.

    Seeded grid points use their aggregate mean; seedless rows stand for
    themselves. Ties go to the smallest grid value. Raises when the metric
    is undefined everywhere.
    """
    metric = _resolve_metric(report, metric)
    candidates = {}
    for agg in report.aggregates:
        candidates[(agg.algorithm, agg.embedding, agg.param, agg.value)] = agg.means.get(metric)
    for row in report.rows:
        key = (row.algorithm, row.embedding, row.param, row.value)
        if key not in candidates:
            candidates[key] = getattr(row, metric)

    groups = {}
    for (algorithm, embedding, param, value), score in candidates.items():
        if score is None:
            continue
        groups.setdefault((algorithm, embedding, param), []).append((value, score))
    if not groups:
        raise ValueError(f"metric {metric!r} is undefined for every grid point")

    best = []
    for (algorithm, embedding, param), scored in sorted(groups.items()):
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        value, score = scored[0]
        best.append(BestRecord(algorithm, embedding, param, value, score))
    return best


# --- report serialization ---------------------------------------------------

_CSV_COLUMNS = (
    ["algorithm", "embedding", "param", "value", "row_type", "seed"]
    + list(METRIC_FIELDS)
    + [f"{m}_sem" for m in METRIC_FIELDS]
)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row_cells(record):
    return [_format_cell(v) for v in _json_values(record)]


def _merged_rows(report):
    merged = list(report.rows) + list(report.aggregates)
    merged.sort(key=_row_sort_key)
    return merged


def emit_report(report, path, output_format="csv"):
    """Write the report; CSV carries metadata as leading # comment lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if output_format == "csv":
        lines = []
        for key in ("tool", "version", "timestamp"):
            if key in report.metadata:
                lines.append(f"# {key}={report.metadata[key]}")
        if "config" in report.metadata:
            lines.append("# config=" + json.dumps(report.metadata["config"], sort_keys=True))
        lines.append(",".join(_CSV_COLUMNS))
        for record in _merged_rows(report):
            lines.append(",".join(_row_cells(record)))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif output_format == "json":
        rows = [
            dict(zip(_CSV_COLUMNS, _json_values(record))) for record in _merged_rows(report)
        ]
        payload = {"metadata": report.metadata, "rows": rows}
        path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    else:
        raise ValueError("output_format must be 'csv' or 'json'")
    return path


def _json_values(record):
    if isinstance(record, AggregateRecord):
        return (
            [record.algorithm, record.embedding, record.param, record.value, "aggregate", None]
            + [record.means[m] for m in METRIC_FIELDS]
            + [record.sems[m] for m in METRIC_FIELDS]
        )
    row_type = "seed" if record.seed is not None else "single"
    return (
        [record.algorithm, record.embedding, record.param, record.value, row_type, record.seed]
        + [getattr(record, m) for m in METRIC_FIELDS]
        + [None] * len(METRIC_FIELDS)
    )


def _parse_cell(text):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def _record_from_values(values):
    head = dict(zip(_CSV_COLUMNS[:6], values[:6]))
    metrics = dict(zip(METRIC_FIELDS, values[6 : 6 + len(METRIC_FIELDS)]))
    sems = dict(zip(METRIC_FIELDS, values[6 + len(METRIC_FIELDS) :]))
    if head["row_type"] == "aggregate":
        return AggregateRecord(
            algorithm=head["algorithm"],
            embedding=head["embedding"],
            param=head["param"],
            value=float(head["value"]),
            means=metrics,
            sems=sems,
        )
    n_clusters = metrics.pop("n_clusters")
    n_noise = metrics.pop("n_noise")
    return ScoreRecord(
        algorithm=head["algorithm"],
        embedding=head["embedding"],
        param=head["param"],
        value=float(head["value"]),
        seed=int(head["seed"]) if head["seed"] is not None else None,
        n_clusters=int(n_clusters),
        n_noise=int(n_noise),
        **{k: (float(v) if v is not None else None) for k, v in metrics.items()},
    )


def parse_report(path):
    """Read a report back from csv or json (detected by extension/content)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        payload = json.loads(text)
        records = [
            _record_from_values([obj[c] for c in _CSV_COLUMNS]) for obj in payload["rows"]
        ]
        metadata = payload.get("metadata", {})
    else:
        metadata = {}
        records = []
        header_seen = False
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key.strip()] = (
                    json.loads(value) if key.strip() == "config" else value
                )
                continue
            if not header_seen:
                if line.split(",") != _CSV_COLUMNS:
                    raise ValueError("unrecognized report header")
                header_seen = True
                continue
            if not line:
                continue
            cells = line.split(",")
            values = cells[:3] + [_parse_cell(c) for c in cells[3:4]] + [cells[4]] + [
                _parse_cell(c) for c in cells[5:]
            ]
            records.append(_record_from_values(values))
    rows = [r for r in records if isinstance(r, ScoreRecord)]
    aggregates = [r for r in records if isinstance(r, AggregateRecord)]
    return SweepReport(rows=rows, aggregates=aggregates, metadata=metadata)
