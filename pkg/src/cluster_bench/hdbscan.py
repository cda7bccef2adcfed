"""Hierarchical density-based clustering with stability-based flat extraction.

Pipeline: per-point core distances (k-th nearest neighbor, self counted
first) -> mutual reachability distances -> dense Prim minimum spanning tree
-> single-linkage hierarchy -> condensation against min_cluster_size ->
excess-of-mass cluster selection. Density is expressed as lambda = 1 / d;
zero distances would give lambda = inf and are clamped to the largest finite
lambda in the tree.

A selected cluster's flat members are all points of its condensed subtree;
points whose fall-out chain reaches the root without passing a selected
cluster are noise. The root itself is never selectable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._base import BaseEstimator
from ._validation import check_positive_int
from .distance import DistanceMatrix, pairwise_distances
from .results import NOISE, ClusteringResult
from .single_linkage import dendrogram_from_edges, minimum_spanning_tree


def core_distances(X, k):
    """Distance from each point to its k-th nearest neighbor, self being the 1st.

    Accepts a data matrix / EmbeddingDataset or a precomputed DistanceMatrix.
    k=1 therefore gives all zeros.
    """
    distances = X if isinstance(X, DistanceMatrix) else pairwise_distances(X)
    k = check_positive_int(k, name="k")
    n = distances.n
    if k > n:
        raise ValueError(f"k={k} exceeds n_samples={n}")
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        row = distances.row(i)  # d(i, i) = 0 occupies the 1st-neighbor slot
        out[i] = np.partition(row, k - 1)[k - 1]
    return out


def mutual_reachability(distances, core):
    """max(core(i), core(j), d(i, j)) as a new DistanceMatrix."""
    if not isinstance(distances, DistanceMatrix):
        raise TypeError("expected a DistanceMatrix")
    core = np.asarray(core, dtype=np.float64)
    n = distances.n
    if core.shape != (n,):
        raise ValueError(f"core distances must have {n} entries, got {core.shape}")
    mr = distances.condensed.copy()
    offset = 0
    for i in range(n - 1):
        length = n - 1 - i
        seg = mr[offset : offset + length]
        np.maximum(seg, core[i], out=seg)
        np.maximum(seg, core[i + 1 :], out=seg)
        offset += length
    return DistanceMatrix(n, mr)


def build_mst(mr):
    """Minimum spanning tree of the mutual-reachability graph: (n-1, 3) edges."""
    return minimum_spanning_tree(mr)


@dataclass(frozen=True)
class CondensedTree:
    """Hierarchy after min-cluster-size condensation.

    Row i says: `child[i]` (a point id < n_points, or a cluster id >= n_points)
    leaves cluster `parent[i]` at density `lam[i]`, taking `size[i]` points
    with it. Cluster ids start at n_points (the root); a cluster's birth
    lambda is the lambda of the row that created it (0 for the root).
    """

    n_points: int
    parent: np.ndarray
    child: np.ndarray
    lam: np.ndarray
    size: np.ndarray

    def __post_init__(self):
        for name in ("parent", "child", "lam", "size"):
            getattr(self, name).flags.writeable = False

    @property
    def root(self):
        return self.n_points

    def cluster_ids(self):
        """All cluster ids, root first, in creation (top-down) order."""
        if self.parent.size == 0:
            return [self.root]
        return [self.root] + sorted(
            int(c) for c in np.unique(self.child[self.child >= self.n_points])
        )

    def birth_lambdas(self):
        births = {self.root: 0.0}
        for c, l in zip(self.child, self.lam):
            if c >= self.n_points:
                births[int(c)] = float(l)
        return births

    def stabilities(self):
        """Per-cluster sum over members of (lambda_left - lambda_birth)."""
        births = self.birth_lambdas()
        stab = {c: 0.0 for c in self.cluster_ids()}
        for p, l, s in zip(self.parent, self.lam, self.size):
            stab[int(p)] += (float(l) - births[int(p)]) * int(s)
        return stab

    def cluster_parents(self):
        return {
            int(c): int(p)
            for p, c in zip(self.parent, self.child)
            if c >= self.n_points
        }

    def point_parents(self):
        """Map point id -> cluster it falls out of."""
        mask = self.child < self.n_points
        return dict(
            zip(self.child[mask].tolist(), self.parent[mask].tolist())
        )

    def death_lambdas(self):
        """Lambda at which each cluster ends (its split, or its last fall-out)."""
        deaths = self.birth_lambdas()
        for p, l in zip(self.parent, self.lam):
            deaths[int(p)] = max(deaths[int(p)], float(l))
        return deaths

    def to_json_obj(self):
        births = self.birth_lambdas()
        deaths = self.death_lambdas()
        stab = self.stabilities()
        parents = self.cluster_parents()
        return [
            {
                "id": c,
                "parent": parents.get(c),
                "lambda_birth": births[c],
                "lambda_death": deaths[c],
                "size": int(self.size[self.child == c][0]) if c != self.root else self.n_points,
                "stability": stab[c],
            }
            for c in self.cluster_ids()
        ]


def condense_tree(dendrogram, min_cluster_size):
    """Collapse splits smaller than min_cluster_size into point fall-outs.

    Walking the merge tree top-down, a split survives only when both sides
    hold at least min_cluster_size points; otherwise the small side's points
    leave the surviving cluster at that split's lambda and the cluster
    identity continues into the big side.
    """
    min_cluster_size = check_positive_int(min_cluster_size, name="min_cluster_size", minimum=2)
    n = dendrogram.n_leaves
    root = 2 * n - 2

    def leaf_count(node):
        return 1 if node < n else int(dendrogram.size[node - n])

    def lam_of(node):
        d = float(dendrogram.distance[node - n])
        return 1.0 / d if d > 0.0 else np.inf

    relabel = {root: n}
    next_cluster = n + 1
    rows_parent, rows_child, rows_lam, rows_size = [], [], [], []

    def emit_points(parent_label, node, lam):
        for leaf in dendrogram.leaves_under(node):
            rows_parent.append(parent_label)
            rows_child.append(leaf)
            rows_lam.append(lam)
            rows_size.append(1)

    queue = [root]
    while queue:
        node = queue.pop(0)
        if node < n:
            continue
        label = relabel[node]
        lam = lam_of(node)
        left, right = dendrogram.node_children(node)
        big_left = leaf_count(left) >= min_cluster_size
        big_right = leaf_count(right) >= min_cluster_size
        if big_left and big_right:
            for child in (left, right):
                relabel[child] = next_cluster
                rows_parent.append(label)
                rows_child.append(next_cluster)
                rows_lam.append(lam)
                rows_size.append(leaf_count(child))
                next_cluster += 1
                queue.append(child)
        elif not big_left and not big_right:
            emit_points(label, left, lam)
            emit_points(label, right, lam)
        else:
            big, small = (left, right) if big_left else (right, left)
            relabel[big] = label
            emit_points(label, small, lam)
            queue.append(big)

    lam_arr = np.array(rows_lam, dtype=np.float64)
    finite = lam_arr[np.isfinite(lam_arr)]
    lam_arr[~np.isfinite(lam_arr)] = finite.max() if finite.size else 1.0
    return CondensedTree(
        n_points=n,
        parent=np.array(rows_parent, dtype=np.int64),
        child=np.array(rows_child, dtype=np.int64),
        lam=lam_arr,
        size=np.array(rows_size, dtype=np.int64),
    )


def select_clusters_eom(tree):
    """Excess-of-mass selection: the set of condensed cluster ids to keep.

    Bottom-up, a cluster is selected iff its stability strictly exceeds the
    summed stability of its selected descendants; descendants of a winner
    are then dropped, so the result is an antichain. The root is never a
    candidate.
    """
    stab = tree.stabilities()
    parents = tree.cluster_parents()
    clusters = tree.cluster_ids()
    children = {c: [] for c in clusters}
    for child, parent in parents.items():
        children[parent].append(child)

    selected = {}
    propagated = {}
    for c in sorted(clusters, reverse=True):  # ids increase top-down
        if c == tree.root:
            continue
        subtree = sum(propagated[ch] for ch in children[c])
        if stab[c] > subtree:
            selected[c] = True
            propagated[c] = stab[c]
        else:
            selected[c] = False
            propagated[c] = subtree
    for c in sorted(clusters):  # deselect below a selected ancestor, top-down
        if c == tree.root:
            continue
        ancestor = parents[c]
        while ancestor != tree.root and not selected[ancestor]:
            ancestor = parents[ancestor]
        if ancestor != tree.root and selected[ancestor]:
            selected[c] = False
    return {c for c, keep in selected.items() if keep}


def extract_clusters_eom(tree, params=None):
    """Flat clustering from a condensed tree via excess-of-mass selection.

    A selected cluster's members are all points of its condensed subtree;
    everything else is noise, so a tree with no cluster beyond the root
    labels every point -1. Clusters are numbered by decreasing member
    count, ties by smallest member id.
    """
    parents = tree.cluster_parents()
    selected = select_clusters_eom(tree)

    point_parent = tree.point_parents()
    member_of = np.full(tree.n_points, -1, dtype=np.int64)
    for p in range(tree.n_points):
        c = point_parent[p]
        while c != tree.root and c not in selected:
            c = parents[c]
        if c in selected:
            member_of[p] = c

    chosen = sorted(selected)
    order = sorted(
        chosen,
        key=lambda c: (
            -int(np.count_nonzero(member_of == c)),
            int(np.flatnonzero(member_of == c)[0]),
        ),
    )
    label_of = {c: i for i, c in enumerate(order)}
    labels = np.full(tree.n_points, NOISE, dtype=np.int64)
    for p in range(tree.n_points):
        if member_of[p] != -1:
            labels[p] = label_of[member_of[p]]
    return ClusteringResult(labels=labels, algorithm="hdbscan", params=dict(params or {}))


class HDBSCAN(BaseEstimator):
    """HDBSCAN estimator over Euclidean (or precomputed) distances.

    Parameters
    ----------
    min_cluster_size : int, >= 2
        Smallest population a condensed cluster may have.
    min_samples : int, optional
        Neighborhood size for core distances; defaults to min_cluster_size,
        mirroring the tuning where only min_cluster_size is varied.

    Attributes
    ----------
    labels_ : (n_samples,) int ndarray, -1 for noise
    n_clusters_ : int
    core_distances_ : (n_samples,) float ndarray
    condensed_tree_ : CondensedTree
    """

    def __init__(self, min_cluster_size, min_samples=None):
        self.min_cluster_size = min_cluster_size
        self.min_samples = min_samples

    def _effective_min_samples(self):
        if self.min_samples is None:
            return int(self.min_cluster_size)
        return check_positive_int(self.min_samples, name="min_samples")

    def fit(self, X, y=None):
        mcs = check_positive_int(self.min_cluster_size, name="min_cluster_size", minimum=2)
        min_samples = self._effective_min_samples()
        distances = X if isinstance(X, DistanceMatrix) else pairwise_distances(X)
        n = distances.n
        if min_samples > n:
            raise ValueError(f"min_samples={min_samples} exceeds n_samples={n}")

        self.core_distances_ = core_distances(distances, min_samples)
        mr = mutual_reachability(distances, self.core_distances_)
        self.mst_ = build_mst(mr)
        self.dendrogram_ = dendrogram_from_edges(self.mst_, n)
        self.condensed_tree_ = condense_tree(self.dendrogram_, mcs)
        result = extract_clusters_eom(
            self.condensed_tree_,
            params={"min_cluster_size": mcs, "min_samples": min_samples},
        )
        self.labels_ = result.labels
        self.n_clusters_ = result.n_clusters
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def to_result(self):
        self._check_fitted("labels_")
        return ClusteringResult(
            labels=self.labels_,
            algorithm="hdbscan",
            params={
                "min_cluster_size": int(self.min_cluster_size),
                "min_samples": self._effective_min_samples(),
            },
        )
