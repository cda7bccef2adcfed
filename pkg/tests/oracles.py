"""Independent naive oracles the test suite checks the package against.

Everything here is deliberately brute force (explicit loops, repeated-min
agglomeration, exhaustive pair counting) and shares no code with the
package; the only common ground is the contracts under test.
"""

import itertools
import math

import numpy as np


def naive_euclidean(a, b):
    total = 0.0
    for x, y in zip(a, b):
        total += (x - y) ** 2
    return math.sqrt(total)


def naive_pairwise_square(X):
    n = len(X)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = naive_euclidean(X[i], X[j])
    return out


def dbscan_oracle(X, eps, min_samples):
    """Brute-force neighborhoods + index-ordered BFS; labels with -1 noise."""
    square = naive_pairwise_square(X)
    n = len(X)
    neighborhoods = [
        [j for j in range(n) if square[i, j] <= eps] for i in range(n)
    ]
    core = [len(neighborhoods[i]) >= min_samples for i in range(n)]
    labels = [-1] * n
    cluster = 0
    for i in range(n):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = cluster
        frontier = [i]
        while frontier:
            q = frontier.pop(0)
            for v in neighborhoods[q]:
                if labels[v] == -1:
                    labels[v] = cluster
                    if core[v]:
                        frontier.append(v)
        cluster += 1
    return labels


def single_linkage_partitions(X):
    """Repeated-min agglomeration; partitions[k] = set of frozensets at k clusters."""
    square = naive_pairwise_square(X)
    clusters = [frozenset([i]) for i in range(len(X))]
    partitions = {len(clusters): set(clusters)}
    while len(clusters) > 1:
        best = None
        best_pair = None
        for a, b in itertools.combinations(range(len(clusters)), 2):
            d = min(square[i, j] for i in clusters[a] for j in clusters[b])
            if best is None or d < best:
                best = d
                best_pair = (a, b)
        a, b = best_pair
        merged = clusters[a] | clusters[b]
        clusters = [c for t, c in enumerate(clusters) if t not in (a, b)] + [merged]
        partitions[len(clusters)] = set(clusters)
    return partitions


def labels_to_partition(labels):
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(i)
    return {frozenset(v) for v in groups.values()}


def kruskal_mst_weight(square):
    n = square.shape[0]
    edges = sorted(
        (square[i, j], i, j) for i in range(n) for j in range(i + 1, n)
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    taken = 0
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += w
            taken += 1
            if taken == n - 1:
                break
    return total


def best_1d_kmeans_inertia(values, k):
    """Exhaustive optimum over exactly-k partitions of 1-D data.

    The squared-error optimum in one dimension is contiguous on the sorted
    values (interval property), so enumerating split positions is exhaustive.
    """
    xs = sorted(values)
    n = len(xs)

    def segment_cost(lo, hi):  # inclusive bounds
        seg = xs[lo : hi + 1]
        mean = sum(seg) / len(seg)
        return sum((v - mean) ** 2 for v in seg)

    best = math.inf
    for splits in itertools.combinations(range(1, n), k - 1):
        bounds = [0, *splits, n]
        cost = sum(segment_cost(bounds[t], bounds[t + 1] - 1) for t in range(k))
        best = min(best, cost)
    return best


def ari_pair_oracle(labels_true, labels_pred):
    """ARI by exhaustive pair counting with one closing division."""
    n = len(labels_true)
    same_both = same_true = same_pred = 0
    for i, j in itertools.combinations(range(n), 2):
        st = labels_true[i] == labels_true[j]
        sp = labels_pred[i] == labels_pred[j]
        same_true += st
        same_pred += sp
        same_both += st and sp
    total = n * (n - 1) // 2
    numer = 2 * total * same_both - 2 * same_true * same_pred
    denom = total * (same_true + same_pred) - 2 * same_true * same_pred
    if denom == 0:
        return 1.0 if labels_to_partition(labels_true) == labels_to_partition(labels_pred) else 0.0
    return numer / denom


def silhouette_oracle(square, labels, exclude_noise=True):
    """Per-point naive silhouette; returns None with fewer than 2 clusters."""
    if exclude_noise:
        kept = [i for i, lab in enumerate(labels) if lab != -1]
    else:
        kept = list(range(len(labels)))
    if not kept:
        return None
    clusters = {}
    for i in kept:
        clusters.setdefault(labels[i], []).append(i)
    if len(clusters) < 2:
        return None
    scores = []
    for i in kept:
        own = clusters[labels[i]]
        if len(own) == 1:
            scores.append(0.0)
            continue
        a = sum(square[i, j] for j in own if j != i) / (len(own) - 1)
        b = min(
            sum(square[i, j] for j in members) / len(members)
            for lab, members in clusters.items()
            if lab != labels[i]
        )
        if max(a, b) == 0.0:
            scores.append(0.0)
        else:
            scores.append((b - a) / max(a, b))
    return sum(scores) / len(scores)


def purity_oracle(labels_true, labels_pred, exclude_noise=True):
    if exclude_noise:
        kept = [i for i, lab in enumerate(labels_pred) if lab != -1]
    else:
        kept = list(range(len(labels_pred)))
    if not kept:
        return None
    clusters = {}
    for i in kept:
        clusters.setdefault(labels_pred[i], []).append(i)
    hits = 0
    for members in clusters.values():
        counts = {}
        for i in members:
            counts[labels_true[i]] = counts.get(labels_true[i], 0) + 1
        hits += max(counts.values())
    return hits / len(kept)


def core_distance_oracle(X, k):
    square = naive_pairwise_square(X)
    out = []
    for i in range(square.shape[0]):
        out.append(sorted(square[i])[k - 1])
    return out


def condense_oracle(merge_tuples, n, min_cluster_size):
    """Set-based condensation of a merge tree, for checking the array version.

    Tracks explicit leaf sets top-down. Returns (clusters, fallouts):
    clusters maps a frozenset of leaves to (birth_lambda, parent_set or None);
    fallouts maps each leaf to (owning cluster's leaf set, lambda).
    """

    children = {}
    sets = {i: frozenset([i]) for i in range(n)}
    for t, (left, right, dist, size) in enumerate(merge_tuples):
        node = n + t
        children[node] = (left, right, dist)
        sets[node] = sets[left] | sets[right]

    root = 2 * n - 2
    clusters = {sets[root]: (0.0, None)}
    fallouts = {}
    stack = [(root, sets[root])]  # (tree node, owning condensed cluster set)
    while stack:
        node, owner = stack.pop()
        if node < n:
            continue
        left, right, dist = children[node]
        lam = math.inf if dist == 0 else 1.0 / dist
        big_left = len(sets[left]) >= min_cluster_size
        big_right = len(sets[right]) >= min_cluster_size
        if big_left and big_right:
            for child in (left, right):
                clusters[sets[child]] = (lam, owner)
                stack.append((child, sets[child]))
        elif not big_left and not big_right:
            for leaf in sets[left] | sets[right]:
                fallouts[leaf] = (owner, lam)
        else:
            big, small = (left, right) if big_left else (right, left)
            for leaf in sets[small]:
                fallouts[leaf] = (owner, lam)
            stack.append((big, owner))
    return clusters, fallouts


def canonical_labels(labels):
    """Relabel clusters by first appearance so permutations compare equal; -1 kept."""
    mapping = {}
    out = []
    for lab in labels:
        if lab == -1:
            out.append(-1)
            continue
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out.append(mapping[lab])
    return out
