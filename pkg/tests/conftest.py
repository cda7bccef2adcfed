import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from cluster_bench import EmbeddingDataset, write_embeddings


def make_dataset(matrix, ratings=None, kind=None):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    n = matrix.shape[0]
    if ratings is None:
        ratings = (np.arange(n) % 5) + 1
    kwargs = {"kind": kind} if kind is not None else {}
    return EmbeddingDataset(
        ids=[f"s{i}" for i in range(n)], ratings=ratings, matrix=matrix, **kwargs
    )


def three_blobs(n_per=100, d=10, sigma=0.5, seed=0):
    """Three well-separated Gaussian blobs with blob index as 1/3/5 rating.

    Center offsets span every dimension (0, b, 2b per dim with b*sqrt(d) > 10)
    so the separation survives the harness's per-dimension z-scoring.
    """
    rng = np.random.default_rng(seed)
    b = 3.5
    centers = np.stack([np.full(d, 0.0), np.full(d, b), np.full(d, 2 * b)])
    X = np.vstack([rng.normal(c, sigma, size=(n_per, d)) for c in centers])
    ratings = np.repeat([1, 3, 5], n_per)
    return make_dataset(X, ratings=ratings)


@pytest.fixture
def blob_csv(tmp_path):
    path = tmp_path / "blobs.csv"
    write_embeddings(three_blobs(), path)
    return path
