"""Lloyd's algorithm with k-means++ (D^2) initialization.

Randomness comes from numpy's PCG64 generator seeded directly with the run
seed; the D^2 draw is an inverse-CDF lookup over the generator's uniform
doubles, so the stream consumption is explicit and a given (data, k, seed)
triple reproduces bit-identically on any platform. Assignment distances use
the |x|^2 - 2 x.c + |c|^2 expansion through BLAS; results are deterministic
for a fixed BLAS threading configuration, and the reported inertia is always
recomputed exactly from direct differences.
"""

from __future__ import annotations

import numpy as np

from ._base import BaseEstimator
from ._validation import as_float_matrix, as_int_labels, check_positive_int
from .results import ClusteringResult


def _d2_draw(rng, weights):
    """Sample an index with probability proportional to `weights` (>= 0)."""
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("no positive weight to sample from")
    cdf = np.cumsum(weights)
    idx = int(np.searchsorted(cdf, rng.random() * total, side="right"))
    if idx >= weights.shape[0]:  # rounding at the very top of the CDF
        idx = int(np.flatnonzero(weights > 0)[-1])
    return idx


def kmeanspp_init(X, k, seed):
    """k-means++ centroid selection: first centroid uniform, rest by D^2.

    Deterministic for fixed (X, k, seed). If every remaining point coincides
    with a chosen centroid (zero total D^2), the next centroid is drawn
    uniformly from the still-unchosen rows so k = n always yields a
    permutation of the rows.
    """
    X = as_float_matrix(X)
    n = X.shape[0]
    k = check_positive_int(k, name="k")
    if k > n:
        raise ValueError(f"k={k} exceeds n_samples={n}")
    rng = np.random.Generator(np.random.PCG64(seed))

    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    chosen = np.zeros(n, dtype=bool)
    first = int(rng.integers(n))
    centroids[0] = X[first]
    chosen[first] = True

    closest_sq = None
    for c in range(1, k):
        diff = X - centroids[c - 1]
        new_sq = np.einsum("ij,ij->i", diff, diff)
        closest_sq = new_sq if closest_sq is None else np.minimum(closest_sq, new_sq)
        if closest_sq.sum() > 0.0:
            idx = _d2_draw(rng, closest_sq)
        else:
            remaining = np.flatnonzero(~chosen)
            idx = int(remaining[rng.integers(remaining.shape[0])])
        centroids[c] = X[idx]
        chosen[idx] = True
    return centroids


def inertia(X, centroids, labels):
    """Within-cluster sum of squared distances, computed from direct differences."""
    X = as_float_matrix(X)
    centroids = as_float_matrix(centroids, name="centroids")
    labels = as_int_labels(labels)
    if labels.shape[0] != X.shape[0]:
        raise ValueError("labels length must match n_samples")
    if labels.size and (labels.min() < 0 or labels.max() >= centroids.shape[0]):
        raise ValueError("label out of range for the given centroids")
    diff = X - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))


class KMeans(BaseEstimator):
    """K-means clustering, seeded for reproducibility.

    Parameters
    ----------
    n_clusters : int
        Number of clusters; must satisfy 1 <= n_clusters <= n_samples.
    seed : int
        Seed for the PCG64 generator driving k-means++.
    max_iter : int, default 300
        Cap on Lloyd iterations.
    tol : float, default 1e-4
        Convergence threshold on the maximum centroid displacement.

    Attributes
    ----------
    cluster_centers_ : (n_clusters, n_dims) ndarray
    labels_ : (n_samples,) ndarray of ints in [0, n_clusters)
    inertia_ : float
    n_iter_ : int
    inertia_history_ : list of per-iteration assignment inertias (non-increasing)
    """

    def __init__(self, n_clusters, seed=0, max_iter=300, tol=1e-4):
        self.n_clusters = n_clusters
        self.seed = seed
        self.max_iter = max_iter
        self.tol = tol

    def _assign(self, X, x_sq, centers):
        c_sq = np.einsum("ij,ij->i", centers, centers)
        d2 = x_sq[:, None] - 2.0 * (X @ centers.T) + c_sq[None, :]
        labels = np.argmin(d2, axis=1)  # ties resolve to the lowest index
        dist_sq = np.maximum(d2[np.arange(X.shape[0]), labels], 0.0)
        return labels, dist_sq

    def fit(self, X, y=None):
        X = as_float_matrix(X, min_samples=1)
        n = X.shape[0]
        k = check_positive_int(self.n_clusters, name="n_clusters")
        if k > n:
            raise ValueError(f"n_clusters={k} exceeds n_samples={n}")
        max_iter = check_positive_int(self.max_iter, name="max_iter")
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")

        centers = kmeanspp_init(X, k, self.seed)
        x_sq = np.einsum("ij,ij->i", X, X)
        history = []
        labels = None
        for it in range(1, max_iter + 1):
            labels, dist_sq = self._assign(X, x_sq, centers)
            labels = self._repair_empty(labels, dist_sq, k)
            step_inertia = float(dist_sq[dist_sq >= 0].sum())
            if history:
                assert step_inertia <= history[-1] * (1 + 1e-9) + 1e-12, (
                    "inertia increased across Lloyd iterations"
                )
            history.append(step_inertia)

            new_centers = np.empty_like(centers)
            for j in range(k):
                members = labels == j
                new_centers[j] = X[members].mean(axis=0)
            displacement = np.sqrt(
                np.einsum("ij,ij->i", new_centers - centers, new_centers - centers)
            ).max()
            centers = new_centers
            if displacement < self.tol or displacement == 0.0:
                break

        self.cluster_centers_ = centers
        self.labels_ = labels
        self.n_iter_ = it
        self.inertia_ = inertia(X, centers, labels)
        self.inertia_history_ = history
        return self

    def _repair_empty(self, labels, dist_sq, k):
        """Refill empty clusters with the farthest points from their centroids.

        Donors are restricted to clusters that keep at least one member, so a
        single pass over the empty labels terminates with all k non-empty.
        dist_sq is mutated: spent donors get -1 so they are not picked twice.
        """
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts == 0):
            donors = counts[labels] >= 2
            candidates = np.where(donors, dist_sq, -np.inf)
            i = int(np.argmax(candidates))
            counts[labels[i]] -= 1
            labels[i] = j
            counts[j] = 1
            dist_sq[i] = -1.0
        return labels

    def predict(self, X):
        self._check_fitted("cluster_centers_")
        X = as_float_matrix(X)
        x_sq = np.einsum("ij,ij->i", X, X)
        labels, _ = self._assign(X, x_sq, self.cluster_centers_)
        return labels

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def to_result(self):
        self._check_fitted("labels_")
        return ClusteringResult(
            labels=self.labels_,
            algorithm="kmeans",
            params={
                "n_clusters": int(self.n_clusters),
                "seed": int(self.seed),
                "max_iter": int(self.max_iter),
                "tol": float(self.tol),
            },
        )
