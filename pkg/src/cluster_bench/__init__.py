"""cluster-bench: compare clustering algorithms over text-embedding matrices.

Loads embedding CSVs, runs KMeans / single-linkage / DBSCAN / HDBSCAN over
their hyperparameter grids, and scores every configuration with silhouette,
adjusted Rand index, and cluster purity.
"""

__version__ = "0.1.0"

from ._base import NotFittedError
from .dataset import (
    EmbeddingDataset,
    EmbeddingKind,
    EmbeddingParseError,
    LabelScheme,
    Standardizer,
    infer_kind_from_path,
    load_embeddings,
    standardize,
    transform_ratings_to_three,
    write_embeddings,
)
from .dbscan import DBSCAN
from .distance import DistanceMatrix, euclidean_distance, pairwise_distances
from .hdbscan import (
    HDBSCAN,
    CondensedTree,
    build_mst,
    condense_tree,
    core_distances,
    extract_clusters_eom,
    mutual_reachability,
    select_clusters_eom,
)
from .kmeans import KMeans, inertia, kmeanspp_init
from .metrics import (
    NoisePolicy,
    ScoreRecord,
    adjusted_rand_index,
    mean_and_sem,
    purity,
    silhouette,
)
from .results import ClusteringResult, count_noise
from .single_linkage import (
    Dendrogram,
    SingleLinkage,
    build_dendrogram,
    cut,
    minimum_spanning_tree,
)
from .sweep import (
    AggregateRecord,
    BestRecord,
    EmbeddingSource,
    SweepConfig,
    SweepReport,
    emit_report,
    parse_report,
    run_sweep,
    select_best,
)

__all__ = [
    "__version__",
    "NotFittedError",
    "EmbeddingDataset",
    "EmbeddingKind",
    "EmbeddingParseError",
    "LabelScheme",
    "Standardizer",
    "infer_kind_from_path",
    "load_embeddings",
    "standardize",
    "transform_ratings_to_three",
    "write_embeddings",
    "DBSCAN",
    "DistanceMatrix",
    "euclidean_distance",
    "pairwise_distances",
    "HDBSCAN",
    "CondensedTree",
    "build_mst",
    "condense_tree",
    "core_distances",
    "extract_clusters_eom",
    "mutual_reachability",
    "select_clusters_eom",
    "KMeans",
    "inertia",
    "kmeanspp_init",
    "NoisePolicy",
    "ScoreRecord",
    "adjusted_rand_index",
    "mean_and_sem",
    "purity",
    "silhouette",
    "ClusteringResult",
    "count_noise",
    "Dendrogram",
    "SingleLinkage",
    "build_dendrogram",
    "cut",
    "minimum_spanning_tree",
    "AggregateRecord",
    "BestRecord",
    "EmbeddingSource",
    "SweepConfig",
    "SweepReport",
    "emit_report",
    "parse_report",
    "run_sweep",
    "select_best",
]
