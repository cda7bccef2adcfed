"""Internal and external clustering validation.

Silhouette and purity take a noise policy: EXCLUDE_NOISE drops -1-labeled
points before scoring (the default, since purity is meant to be computed
only over identified clusters), while NOISE_AS_CLUSTER keeps them as one
ordinary cluster for sensitivity checks. The adjusted Rand index always
treats -1 as an ordinary class so mass noise is penalized.

Metrics that can lose their footing (fewer than two clusters left, nothing
retained) return None rather than raising: a sweep records the undefined
cell and moves on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import sqrt

import numpy as np

from ._validation import as_int_labels, check_same_length
from .distance import DistanceMatrix
from .results import NOISE


class NoisePolicy(enum.Enum):
    EXCLUDE_NOISE = "exclude"
    NOISE_AS_CLUSTER = "as-cluster"


def _compact(labels):
    """Relabel to 0..C-1 (value order; fine wherever only sums matter)."""
    _, inverse = np.unique(labels, return_inverse=True)
    return inverse


def _canonical(labels):
    """Relabel to 0..C-1 in first-appearance order; equal arrays <=> equal partitions."""
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse]


def silhouette(distances, labels, noise_policy=NoisePolicy.EXCLUDE_NOISE):
    """Mean silhouette coefficient, or None when fewer than 2 clusters remain.

    For a retained point i in a cluster of size > 1, a(i) is its mean
    distance to cluster mates, b(i) the smallest mean distance to another
    cluster, s(i) = (b - a) / max(a, b). Points in singleton clusters score
    0, as do coincident points with a = b = 0.
    """
    if not isinstance(distances, DistanceMatrix):
        raise TypeError("expected a DistanceMatrix")
    labels = as_int_labels(labels)
    if labels.shape[0] != distances.n:
        raise ValueError("labels length must match the distance matrix")
    if distances.n < 2:
        raise ValueError("need at least 2 samples")

    if noise_policy is NoisePolicy.EXCLUDE_NOISE:
        idx = np.flatnonzero(labels != NOISE)
    else:
        idx = np.arange(labels.shape[0])
    if idx.size == 0:
        return None
    compact = _compact(labels[idx])
    n_clusters = int(compact.max()) + 1
    if n_clusters < 2:
        return None

    square = distances.to_square()
    if idx.size != distances.n:
        square = square[np.ix_(idx, idx)]
    m = idx.size
    sizes = np.bincount(compact, minlength=n_clusters)
    sums = np.zeros((m, n_clusters), dtype=np.float64)
    for c in range(n_clusters):
        sums[:, c] = square[:, compact == c].sum(axis=1)

    own = sums[np.arange(m), compact]
    own_size = sizes[compact]
    with np.errstate(invalid="ignore", divide="ignore"):
        a = own / (own_size - 1)
        mean_other = sums / sizes[None, :]
        mean_other[np.arange(m), compact] = np.inf
        b = mean_other.min(axis=1)
        s = (b - a) / np.maximum(a, b)
    s[own_size == 1] = 0.0  # singleton clusters
    s[np.maximum(a, b) == 0.0] = 0.0  # coincident points
    return float(s.mean())


def _pair_sums(labels_true, labels_pred):
    """Integer ingredients of the ARI formula from the contingency table."""
    t = _compact(labels_true)
    p = _compact(labels_pred)
    n_t = int(t.max()) + 1 if t.size else 0
    n_p = int(p.max()) + 1 if p.size else 0
    table = np.bincount(t * n_p + p, minlength=n_t * n_p).reshape(n_t, n_p)

    def comb2(x):
        return int(x) * (int(x) - 1) // 2

    same_both = sum(comb2(v) for v in table.ravel())
    same_true = sum(comb2(v) for v in table.sum(axis=1))
    same_pred = sum(comb2(v) for v in table.sum(axis=0))
    total = comb2(t.shape[0])
    return same_both, same_true, same_pred, total


def adjusted_rand_index(labels_true, labels_pred):
    """Chance-corrected pair-counting agreement between two labelings.

    Noise labels participate as an ordinary class. Computed in exact integer
    arithmetic with a single closing division; when the denominator
    degenerates (both partitions all-singletons or both one-cluster) the
    result is 1.0 for identical partitions and 0.0 otherwise.
    """
    labels_true = as_int_labels(labels_true, name="labels_true")
    labels_pred = as_int_labels(labels_pred, name="labels_pred")
    check_same_length(labels_true, labels_pred, names=("labels_true", "labels_pred"))
    if labels_true.shape[0] < 2:
        raise ValueError("need at least 2 samples")

    same_both, same_true, same_pred, total = _pair_sums(labels_true, labels_pred)
    # ARI = (sum_ij C(n_ij,2) - S_t S_p / T) / ((S_t + S_p)/2 - S_t S_p / T),
    # scaled by 2T to stay integral until the final division.
    numer = 2 * total * same_both - 2 * same_true * same_pred
    denom = total * (same_true + same_pred) - 2 * same_true * same_pred
    if denom == 0:
        identical = bool(np.array_equal(_canonical(labels_true), _canonical(labels_pred)))
        return 1.0 if identical else 0.0
    return numer / denom


def purity(labels_true, labels_pred, noise_policy=NoisePolicy.EXCLUDE_NOISE):
    """Fraction of retained points whose cluster's majority class is their own.

    Under EXCLUDE_NOISE, -1-labeled predictions are dropped first; returns
    None when nothing is retained.
    """
    labels_true = as_int_labels(labels_true, name="labels_true")
    labels_pred = as_int_labels(labels_pred, name="labels_pred")
    check_same_length(labels_true, labels_pred, names=("labels_true", "labels_pred"))

    if noise_policy is NoisePolicy.EXCLUDE_NOISE:
        keep = labels_pred != NOISE
        labels_true, labels_pred = labels_true[keep], labels_pred[keep]
    if labels_pred.shape[0] == 0:
        return None
    t = _compact(labels_true)
    p = _compact(labels_pred)
    table = np.bincount(
        t * (int(p.max()) + 1) + p,
        minlength=(int(t.max()) + 1) * (int(p.max()) + 1),
    ).reshape(int(t.max()) + 1, int(p.max()) + 1)
    return int(table.max(axis=0).sum()) / int(labels_pred.shape[0])


def mean_and_sem(values):
    """Mean and standard error of the mean (sample std / sqrt(n); 0 when n=1)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("need a non-empty 1-D sequence")
    mean = float(arr.mean())
    if arr.size == 1:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / sqrt(arr.size))


@dataclass(frozen=True)
class ScoreRecord:
    """One (algorithm, embedding, hyperparameter[, seed]) evaluation row.

    Metric fields are None when undefined (silhouette with one cluster,
    purity with everything noise, scheme not requested, non-kmeans inertia).
    """

    algorithm: str
    embedding: str
    param: str
    value: float
    n_clusters: int
    n_noise: int
    seed: int | None = None
    silhouette: float | None = None
    ari_5: float | None = None
    purity_5: float | None = None
    ari_3: float | None = None
    purity_3: float | None = None
    inertia: float | None = None

    def __post_init__(self):
        if self.silhouette is not None and not -1.0 <= self.silhouette <= 1.0:
            raise ValueError(f"silhouette {self.silhouette} outside [-1, 1]")
        for name in ("ari_5", "ari_3"):
            v = getattr(self, name)
            if v is not None and v > 1.0:
                raise ValueError(f"{name} {v} exceeds 1")
        for name in ("purity_5", "purity_3"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v <= 1.0:
                raise ValueError(f"{name} {v} outside (0, 1]")
        if self.n_noise < 0 or self.n_clusters < 0:
            raise ValueError("counts must be nonnegative")
