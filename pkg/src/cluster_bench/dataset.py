"""Embedding datasets: CSV loading, z-scoring, and rating-label transforms.

The on-disk interchange format is a plain CSV with header
``id,rating,e0,...,e{d-1}``; optional leading ``#`` comment lines (used by the
extractor to record model provenance) are skipped. Floats are written with
full round-trip precision so load(write(ds)) is bit-exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._base import BaseEstimator
from ._validation import as_float_matrix, as_int_labels

RATING_MIN = 1
RATING_MAX = 5


class EmbeddingKind(enum.Enum):
    """Embedding families compared by the benchmark, with their fixed widths."""

    W2V_AVG = "w2v_avg"
    BERT_CLS = "bert_cls"
    BERT_AVG = "bert_avg"
    OTHER = "other"

    @property
    def n_dims(self):
        """Declared dimensionality, or None for OTHER."""
        return {"w2v_avg": 300, "bert_cls": 768, "bert_avg": 768}.get(self.value)


class LabelScheme(enum.Enum):
    FIVE_CLASS = 5
    THREE_CLASS = 3


class EmbeddingParseError(ValueError):
    """Malformed embedding CSV; carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EmbeddingDataset:
    """n_samples x n_dims embedding matrix with per-sample ids and star ratings.

    Immutable after construction; the matrix is locked against writes so
    datasets can be shared freely across threads.
    """

    ids: tuple
    ratings: np.ndarray
    matrix: np.ndarray
    kind: EmbeddingKind = EmbeddingKind.OTHER

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        ratings = as_int_labels(self.ratings, name="ratings")
        matrix = as_float_matrix(self.matrix, name="matrix")
        if len(self.ids) != len(ratings) or len(ratings) != matrix.shape[0]:
            raise ValueError(
                f"ids ({len(self.ids)}), ratings ({len(ratings)}) and matrix rows "
                f"({matrix.shape[0]}) must agree"
            )
        if ratings.size and (
            ratings.min() < RATING_MIN or ratings.max() > RATING_MAX
        ):
            raise ValueError("ratings must lie in {1..5}")
        declared = self.kind.n_dims
        if declared is not None and matrix.shape[1] != declared:
            raise ValueError(
                f"{self.kind.value} embeddings are {declared}-dimensional, "
                f"got {matrix.shape[1]}"
            )
        ratings.flags.writeable = False
        matrix.flags.writeable = False
        object.__setattr__(self, "ratings", ratings)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n_samples(self):
        return self.matrix.shape[0]

    @property
    def n_dims(self):
        return self.matrix.shape[1]

    def labels_for(self, scheme):
        """Ground-truth class labels under the given LabelScheme."""
        if scheme is LabelScheme.FIVE_CLASS:
            return self.ratings
        return transform_ratings_to_three(self.ratings)


def infer_kind_from_path(path):
    """Apply the `<dataset>_<kind>.csv` naming convention; OTHER when absent."""
    stem = Path(path).stem.lower()
    for kind in (EmbeddingKind.W2V_AVG, EmbeddingKind.BERT_CLS, EmbeddingKind.BERT_AVG):
        if stem == kind.value or stem.endswith("_" + kind.value):
            return kind
    return EmbeddingKind.OTHER


def load_embeddings(path, kind=None):
    """Load an embedding CSV into an EmbeddingDataset.

    Parameters
    ----------
    path : str or Path
        File in the canonical format (see module docstring).
    kind : EmbeddingKind, optional
        Override for the kind inferred from the filename.

    Raises
    ------
    EmbeddingParseError
        Malformed header, non-numeric cell, out-of-range rating, or ragged
        row; the message names the 1-based physical line number.
    """
    path = Path(path)
    if kind is None:
        kind = infer_kind_from_path(path)

    ids = []
    ratings = []
    rows = []
    row_lines = []
    n_cols = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lineno = 0
        header_seen = False
        for raw in fh:
            lineno += 1
            line = raw.rstrip("\r\n")
            if not header_seen:
                if line.startswith("#"):
                    continue
                cells = line.split(",")
                if len(cells) < 3 or cells[0] != "id" or cells[1] != "rating":
                    raise EmbeddingParseError(
                        "header must be 'id,rating,e0,...'", line=lineno
                    )
                expected = [f"e{j}" for j in range(len(cells) - 2)]
                if cells[2:] != expected:
                    raise EmbeddingParseError(
                        "embedding columns must be named e0..e{d-1} in order",
                        line=lineno,
                    )
                n_cols = len(cells)
                header_seen = True
                continue
            if line == "":
                raise EmbeddingParseError("blank line", line=lineno)
            cells = line.split(",")
            if len(cells) != n_cols:
                raise EmbeddingParseError(
                    f"expected {n_cols} cells, got {len(cells)}", line=lineno
                )
            try:
                rating = int(cells[1])
            except ValueError:
                raise EmbeddingParseError(
                    f"rating {cells[1]!r} is not an integer", line=lineno
                ) from None
            if not RATING_MIN <= rating <= RATING_MAX:
                raise EmbeddingParseError(
                    f"rating {rating} outside {RATING_MIN}..{RATING_MAX}",
                    line=lineno,
                )
            try:
                vec = [float(c) for c in cells[2:]]
            except ValueError:
                raise EmbeddingParseError("non-numeric embedding cell", line=lineno) from None
            ids.append(cells[0])
            ratings.append(rating)
            rows.append(vec)
            row_lines.append(lineno)
    if not header_seen:
        raise EmbeddingParseError("empty file: missing header", line=1)
    if not rows:
        raise EmbeddingParseError("no data rows", line=lineno)
    matrix = np.array(rows, dtype=np.float64)
    finite_rows = np.isfinite(matrix).all(axis=1)
    if not finite_rows.all():
        raise EmbeddingParseError(
            "non-finite embedding value",
            line=row_lines[int(np.flatnonzero(~finite_rows)[0])],
        )
    try:
        return EmbeddingDataset(ids=ids, ratings=ratings, matrix=matrix, kind=kind)
    except ValueError as exc:
        raise EmbeddingParseError(str(exc)) from exc


def write_embeddings(dataset, path, comments=()):
    """Write a dataset back to the canonical CSV format at full precision."""
    path = Path(path)
    d = dataset.n_dims
    header = "id,rating," + ",".join(f"e{j}" for j in range(d))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        fh.write(header + "\n")
        for i in range(dataset.n_samples):
            cells = [dataset.ids[i], str(int(dataset.ratings[i]))]
            cells.extend(repr(v) for v in dataset.matrix[i].tolist())
            fh.write(",".join(cells) + "\n")
    return path


def transform_ratings_to_three(ratings):
    """Collapse 1-5 star ratings to three classes: {1,2}->1, {3}->2, {4,5}->3."""
    arr = as_int_labels(ratings, name="ratings")
    if arr.size and (arr.min() < RATING_MIN or arr.max() > RATING_MAX):
        raise ValueError("ratings must lie in {1..5}")
    out = np.empty_like(arr)
    out[arr < 3] = 1
    out[arr == 3] = 2
    out[arr > 3] = 3
    return out


class Standardizer(BaseEstimator):
    """Per-dimension z-scoring with population standard deviation.

    Zero-variance dimensions are mapped to all-zero instead of raising, so a
    constant embedding dimension cannot kill a sweep.
    """

    def fit(self, X, y=None):
        X = as_float_matrix(X, min_samples=2)
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)  # population std (ddof=0)
        self.zero_variance_mask_ = scale == 0.0
        scale = scale.copy()
        scale[self.zero_variance_mask_] = 1.0
        self.scale_ = scale
        return self

    def transform(self, X):
        self._check_fitted("mean_")
        X = as_float_matrix(X)
        out = (X - self.mean_) / self.scale_
        out[:, self.zero_variance_mask_] = 0.0
        return out

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)


def standardize(dataset):
    """Return a copy of the dataset with each dimension z-scored.

    Population standard deviation; zero-variance dimensions become all-zero;
    ids, ratings and kind are unchanged. Requires n_samples >= 2.
    """
    matrix = Standardizer().fit_transform(dataset.matrix)
    return EmbeddingDataset(
        ids=dataset.ids, ratings=dataset.ratings, matrix=matrix, kind=dataset.kind
    )
