"""Density-based clustering with eps-neighborhoods and core/border/noise roles.

The expansion needs no randomness: unvisited core points are taken in
ascending index order and each cluster grows breadth-first with neighbor
lists kept sorted, so a fixed input order yields bit-identical labels.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ._base import BaseEstimator
from ._validation import check_positive_int
from .distance import DistanceMatrix, pairwise_distances
from .results import NOISE, ClusteringResult, count_noise

__all__ = ["DBSCAN", "count_noise"]


class DBSCAN(BaseEstimator):
    """DBSCAN over Euclidean distances.

    A point is core iff its closed eps-ball (itself included) holds at least
    min_samples points. Clusters are the connected components of core points
    under eps-adjacency; border points join the cluster of the first core
    point that reaches them during the index-ordered expansion; everything
    else is noise (-1).

    Parameters
    ----------
    eps : float
        Neighborhood radius, > 0. Membership uses d <= eps.
    min_samples : int, default 5
        Minimum closed-ball population for a core point.

    Attributes
    ----------
    labels_ : (n_samples,) int ndarray, -1 for noise
    core_mask_ : (n_samples,) bool ndarray
    n_clusters_ : int
    n_noise_ : int
    """

    def __init__(self, eps, min_samples=5):
        self.eps = eps
        self.min_samples = min_samples

    def fit(self, X, y=None):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        min_samples = check_positive_int(self.min_samples, name="min_samples")
        if isinstance(X, DistanceMatrix):
            distances = X
        else:
            distances = pairwise_distances(X)
        n = distances.n

        neighbors = []
        core = np.zeros(n, dtype=bool)
        for i in range(n):
            hits = np.flatnonzero(distances.row(i) <= self.eps)  # includes i itself
            neighbors.append(hits)
            core[i] = hits.size >= min_samples

        labels = np.full(n, NOISE, dtype=np.int64)
        cluster = 0
        for i in range(n):
            if labels[i] != NOISE or not core[i]:
                continue
            labels[i] = cluster
            queue = deque([i])
            while queue:
                q = queue.popleft()
                for v in neighbors[q]:
                    if labels[v] == NOISE:
                        labels[v] = cluster
                        if core[v]:
                            queue.append(v)
            cluster += 1

        self.labels_ = labels
        self.core_mask_ = core
        self.n_clusters_ = cluster
        self.n_noise_ = count_noise(labels)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def to_result(self):
        self._check_fitted("labels_")
        return ClusteringResult(
            labels=self.labels_,
            algorithm="dbscan",
            params={"eps": float(self.eps), "min_samples": int(self.min_samples)},
        )
