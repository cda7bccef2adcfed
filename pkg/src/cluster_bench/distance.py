"""Euclidean distance primitives shared by every algorithm module.

Distances are accumulated in float64 from direct differences (no gram-matrix
shortcut) so they agree with a naive summation oracle to rounding error even
in 768 dimensions.
"""

from __future__ import annotations

import numpy as np

from ._validation import as_float_matrix


def euclidean_distance(a, b):
    """Euclidean distance between two equal-length real vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"vectors must be 1-D with equal length, got {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(np.dot(diff, diff)))


class DistanceMatrix:
    """Symmetric pairwise-distance matrix in condensed upper-triangular storage.

    Entry (i, j) for i < j lives at offset ``n*i - i*(i+1)/2 + (j - i - 1)``.
    Immutable after construction.
    """

    __slots__ = ("n", "condensed", "_square")

    def __init__(self, n, condensed):
        condensed = np.ascontiguousarray(condensed, dtype=np.float64)
        expected = n * (n - 1) // 2
        if condensed.shape != (expected,):
            raise ValueError(
                f"condensed storage for n={n} needs {expected} entries, "
                f"got shape {condensed.shape}"
            )
        if condensed.size and (not np.isfinite(condensed).all() or condensed.min() < 0):
            raise ValueError("distances must be finite and nonnegative")
        condensed.flags.writeable = False
        self.n = n
        self.condensed = condensed
        self._square = None

    def index(self, i, j):
        if i == j:
            raise IndexError("diagonal entries are implicit zeros")
        if i > j:
            i, j = j, i
        if not (0 <= i < j < self.n):
            raise IndexError(f"pair ({i}, {j}) out of range for n={self.n}")
        return self.n * i - (i * (i + 1)) // 2 + (j - i - 1)

    def value(self, i, j):
        if i == j:
            return 0.0
        return float(self.condensed[self.index(i, j)])

    def __getitem__(self, pair):
        return self.value(*pair)

    def row(self, i):
        """Distances from point i to all points (fresh array, zero at i).

        Assembled from condensed storage in O(n), so row-scanning algorithms
        stay within O(n) working memory.
        """
        if not 0 <= i < self.n:
            raise IndexError(f"row {i} out of range for n={self.n}")
        n = self.n
        out = np.empty(n, dtype=np.float64)
        out[i] = 0.0
        if i > 0:
            j = np.arange(i)
            out[:i] = self.condensed[n * j - (j * (j + 1)) // 2 + (i - j - 1)]
        if i < n - 1:
            start = self.index(i, i + 1)
            out[i + 1 :] = self.condensed[start : start + (n - 1 - i)]
        return out

    def to_square(self):
        """The full symmetric matrix (zero diagonal), built once and cached.

        The cache is read-only, so sharing it across threads is safe.
        """
        if self._square is None:
            square = np.zeros((self.n, self.n), dtype=np.float64)
            iu = np.triu_indices(self.n, k=1)
            square[iu] = self.condensed
            square[(iu[1], iu[0])] = self.condensed
            square.flags.writeable = False
            self._square = square
        return self._square


def pairwise_distances(X):
    """All-pairs Euclidean distances as a DistanceMatrix.

    Accepts an EmbeddingDataset or an (n, d) array; requires n >= 2. Output
    is identical regardless of how the rows are chunked internally.
    """
    X = as_float_matrix(X, min_samples=2)
    n = X.shape[0]
    condensed = np.empty(n * (n - 1) // 2, dtype=np.float64)
    offset = 0
    for i in range(n - 1):
        diff = X[i + 1 :] - X[i]
        np.sqrt(np.einsum("ij,ij->i", diff, diff), out=condensed[offset : offset + n - 1 - i])
        offset += n - 1 - i
    return DistanceMatrix(n, condensed)
