"""Single-linkage agglomerative clustering via the minimum spanning tree.

Merging the MST edges in ascending weight order is exactly single linkage,
which keeps the build at O(n^2) time and O(n) working memory on top of the
condensed distance input. Ties between equal-weight edges are broken toward
the smaller (leaf-id) pair, so a fixed input always produces the same
dendrogram; partitions cut from tied data are valid but the specific
tie choice is not part of the contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._base import BaseEstimator
from ._validation import check_positive_int
from .distance import DistanceMatrix, pairwise_distances
from .results import ClusteringResult


def minimum_spanning_tree(distances):
    """Dense Prim MST over a DistanceMatrix; returns (n-1, 3) rows (u, v, w).

    Vertices are scanned in index order, so equal-weight alternatives resolve
    to the lowest-index vertex deterministically.
    """
    if not isinstance(distances, DistanceMatrix):
        raise TypeError("expected a DistanceMatrix")
    n = distances.n
    if n < 2:
        raise ValueError("need at least 2 points to span a tree")
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_w = distances.row(0)
    best_w[0] = np.inf
    best_src = np.zeros(n, dtype=np.int64)
    edges = np.empty((n - 1, 3), dtype=np.float64)
    for step in range(n - 1):
        u = int(np.where(in_tree, np.inf, best_w).argmin())
        edges[step] = (best_src[u], u, best_w[u])
        in_tree[u] = True
        row = distances.row(u)
        closer = (~in_tree) & (row < best_w)
        best_w[closer] = row[closer]
        best_src[closer] = u
    return edges


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree: leaves 0..n-1, internal nodes n..2n-2 in merge order.

    Merge t creates node n+t by joining nodes left[t] and right[t] at
    distance[t]; size[t] counts the leaves underneath. Single linkage is
    monotone, so distances are non-decreasing along the merge list.
    """

    n_leaves: int
    left: np.ndarray
    right: np.ndarray
    distance: np.ndarray
    size: np.ndarray

    def __post_init__(self):
        n = self.n_leaves
        for name in ("left", "right", "distance", "size"):
            arr = getattr(self, name)
            if arr.shape != (n - 1,):
                raise ValueError(f"{name} must have {n - 1} entries")
            arr.flags.writeable = False
        if np.any(np.diff(self.distance) < 0):
            raise ValueError("merge distances must be non-decreasing")

    def merges(self):
        """The merge list as (left, right, distance, merged_size) tuples."""
        return [
            (int(l), int(r), float(d), int(s))
            for l, r, d, s in zip(self.left, self.right, self.distance, self.size)
        ]

    def node_children(self, node):
        t = node - self.n_leaves
        return int(self.left[t]), int(self.right[t])

    def leaves_under(self, node):
        """Leaf ids below a node, in ascending order."""
        out = []
        stack = [node]
        while stack:
            v = stack.pop()
            if v < self.n_leaves:
                out.append(v)
            else:
                stack.extend(self.node_children(v))
        out.sort()
        return out


def dendrogram_from_edges(edges, n):
    """Merge spanning-tree edges in ascending weight order into a Dendrogram."""
    order = np.lexsort(
        (
            np.maximum(edges[:, 0], edges[:, 1]),
            np.minimum(edges[:, 0], edges[:, 1]),
            edges[:, 2],
        )
    )
    edges = edges[order]

    # Union-find over node ids; each union is assigned the next internal id.
    parent = np.arange(2 * n - 1, dtype=np.int64)
    sizes = np.ones(2 * n - 1, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    left = np.empty(n - 1, dtype=np.int64)
    right = np.empty(n - 1, dtype=np.int64)
    distance = np.empty(n - 1, dtype=np.float64)
    size = np.empty(n - 1, dtype=np.int64)
    for t in range(n - 1):
        u, v, w = int(edges[t, 0]), int(edges[t, 1]), float(edges[t, 2])
        ru, rv = find(u), find(v)
        new = n + t
        left[t], right[t] = min(ru, rv), max(ru, rv)
        distance[t] = w
        size[t] = sizes[ru] + sizes[rv]
        parent[ru] = parent[rv] = new
        sizes[new] = size[t]
    return Dendrogram(n_leaves=n, left=left, right=right, distance=distance, size=size)


def build_dendrogram(distances):
    """Single-linkage dendrogram of a DistanceMatrix (n >= 2)."""
    edges = minimum_spanning_tree(distances)
    return dendrogram_from_edges(edges, distances.n)


def cut(dendrogram, n_clusters):
    """Flat clustering with exactly n_clusters components.

    Equivalent to undoing the last n_clusters - 1 merges. Components are
    numbered 0..n_clusters-1 in order of their smallest leaf id; there is no
    noise label.
    """
    n = dendrogram.n_leaves
    n_clusters = check_positive_int(n_clusters, name="n_clusters")
    if n_clusters > n:
        raise ValueError(f"n_clusters={n_clusters} exceeds n_leaves={n}")

    parent = np.arange(n, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    # A representative leaf per dendrogram node lets merges union leaf sets.
    leaf_repr = np.empty(2 * n - 1, dtype=np.int64)
    leaf_repr[:n] = np.arange(n)
    for t in range(n - n_clusters):
        l, r = int(dendrogram.left[t]), int(dendrogram.right[t])
        parent[find(leaf_repr[l])] = find(leaf_repr[r])
        leaf_repr[n + t] = leaf_repr[l]

    labels = np.empty(n, dtype=np.int64)
    label_of_root = {}
    for i in range(n):
        root = find(i)
        if root not in label_of_root:
            label_of_root[root] = len(label_of_root)
        labels[i] = label_of_root[root]
    return ClusteringResult(
        labels=labels,
        algorithm="single_linkage",
        params={"n_clusters": int(n_clusters)},
    )


class SingleLinkage(BaseEstimator):
    """Single-linkage clustering cut at a requested number of clusters.

    fit() accepts a data matrix, an EmbeddingDataset, or a precomputed
    DistanceMatrix. The dendrogram is exposed so several cut levels can be
    taken from one build.
    """

    def __init__(self, n_clusters=2):
        self.n_clusters = n_clusters

    def fit(self, X, y=None):
        distances = X if isinstance(X, DistanceMatrix) else pairwise_distances(X)
        self.dendrogram_ = build_dendrogram(distances)
        result = cut(self.dendrogram_, self.n_clusters)
        self.labels_ = result.labels
        self.n_clusters_ = result.n_clusters
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def to_result(self):
        self._check_fitted("labels_")
        return ClusteringResult(
            labels=self.labels_,
            algorithm="single_linkage",
            params={"n_clusters": int(self.n_clusters)},
        )
