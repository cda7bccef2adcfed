"""Input validation helpers shared by the estimators and metric functions."""

import numpy as np


def as_float_matrix(X, *, min_samples=1, name="X"):
    """Coerce X to a C-contiguous float64 2-D array and validate it.

    Accepts an ndarray, a nested sequence, or anything exposing a `matrix`
    attribute (EmbeddingDataset).
    """
    if hasattr(X, "matrix"):
        X = X.matrix
    arr = np.ascontiguousarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_samples:
        raise ValueError(
            f"{name} needs at least {min_samples} samples, got {arr.shape[0]}"
        )
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_int_labels(labels, *, name="labels"):
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        rounded = np.asarray(arr, dtype=np.int64)
        if not np.array_equal(rounded, arr):
            raise ValueError(f"{name} must be integers")
        arr = rounded
    return arr.astype(np.int64, copy=False)


def check_same_length(a, b, *, names=("a", "b")):
    if len(a) != len(b):
        raise ValueError(
            f"{names[0]} and {names[1]} differ in length: {len(a)} vs {len(b)}"
        )


def check_positive_int(value, *, name, minimum=1):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
