"""Shared clustering-result container with noise accounting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_int_labels

NOISE = -1


@dataclass(frozen=True)
class ClusteringResult:
    """Per-sample cluster labels plus provenance.

    Labels are 0..n_clusters-1, with -1 marking noise (unused by the
    partitioning algorithms). `params` records the hyperparameters the
    labels were produced with.
    """

    labels: np.ndarray
    algorithm: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = as_int_labels(self.labels)
        if labels.size and labels.min() < NOISE:
            raise ValueError("labels must be >= -1")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def n_samples(self):
        return self.labels.shape[0]

    @property
    def n_clusters(self):
        mask = self.labels >= 0
        return int(np.unique(self.labels[mask]).size)


def count_noise(result):
    """Number of points labeled -1. Accepts a ClusteringResult or raw labels."""
    labels = result.labels if isinstance(result, ClusteringResult) else as_int_labels(result)
    return int(np.count_nonzero(labels == NOISE))
