"""Acceptance criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v` to get one pass/fail line per
criterion. Everything here works on synthetic data; the criteria that need
the real embedding files live in test_reported_numbers.py.
"""

import numpy as np
import pytest

from cluster_bench import (
    DBSCAN,
    HDBSCAN,
    KMeans,
    SweepConfig,
    adjusted_rand_index,
    build_dendrogram,
    build_mst,
    core_distances,
    cut,
    emit_report,
    mutual_reachability,
    pairwise_distances,
    purity,
    run_sweep,
    silhouette,
    write_embeddings,
)
from cluster_bench.metrics import NoisePolicy
from conftest import three_blobs
from oracles import (
    ari_pair_oracle,
    best_1d_kmeans_inertia,
    canonical_labels,
    dbscan_oracle,
    kruskal_mst_weight,
    labels_to_partition,
    purity_oracle,
    silhouette_oracle,
    single_linkage_partitions,
)


def test_criterion_dbscan_matches_bruteforce_oracle():
    """200 random instances (n<=60, d<=5): exact labels up to permutation."""
    rng = np.random.default_rng(20260801)
    for trial in range(200):
        n = int(rng.integers(4, 61))
        d = int(rng.integers(1, 6))
        X = rng.uniform(0.0, 4.0, size=(n, d))
        eps = float(rng.uniform(0.2, 1.8))
        min_samples = int(rng.integers(1, 7))
        got = DBSCAN(eps=eps, min_samples=min_samples).fit(X).labels_
        want = dbscan_oracle(X, eps, min_samples)
        assert canonical_labels(list(got)) == canonical_labels(want), (
            f"trial {trial}: eps={eps}, min_samples={min_samples}"
        )


def test_criterion_single_linkage_matches_naive_oracle():
    """100 random instances (n<=40): flat cuts equal the O(n^3) oracle at every k."""
    rng = np.random.default_rng(20260802)
    for trial in range(100):
        n = int(rng.integers(3, 41))
        d = int(rng.integers(1, 4))
        X = rng.normal(size=(n, d))
        dend = build_dendrogram(pairwise_distances(X))
        oracle = single_linkage_partitions(X)
        for k in range(1, n + 1):
            got = labels_to_partition(cut(dend, k).labels)
            assert got == oracle[k], f"trial {trial}: n={n}, k={k}"


def test_criterion_hdbscan_mst_weight_matches_kruskal():
    """100 instances (n<=30): Prim MST total weight equals the Kruskal oracle."""
    rng = np.random.default_rng(20260803)
    for trial in range(100):
        n = int(rng.integers(3, 31))
        X = rng.normal(size=(n, int(rng.integers(1, 4))))
        D = pairwise_distances(X)
        k = int(rng.integers(1, min(n, 6) + 1))
        mr = mutual_reachability(D, core_distances(D, k))
        got = build_mst(mr)[:, 2].sum()
        want = kruskal_mst_weight(mr.to_square())
        assert abs(got - want) <= 1e-9 * max(want, 1.0), f"trial {trial}"


def test_criterion_hdbscan_degenerate_config_matches_single_linkage():
    """min_samples=1, min_cluster_size=2: hierarchy merge order equals single linkage."""
    rng = np.random.default_rng(20260804)
    for trial in range(25):
        n = int(rng.integers(5, 40))
        X = rng.normal(size=(n, 2))
        D = pairwise_distances(X)
        model = HDBSCAN(min_cluster_size=2, min_samples=1).fit(D)
        plain = build_dendrogram(D)
        assert np.array_equal(model.dendrogram_.left, plain.left)
        assert np.array_equal(model.dendrogram_.right, plain.right)
        assert np.array_equal(model.dendrogram_.distance, plain.distance)


def test_criterion_hdbscan_extracted_clusters_respect_min_size():
    """Every extracted cluster has >= min_cluster_size members on all fuzz instances."""
    rng = np.random.default_rng(20260805)
    for trial in range(100):
        n = int(rng.integers(5, 31))
        X = rng.uniform(0.0, 3.0, size=(n, 2))
        mcs = int(rng.integers(2, min(8, n) + 1))
        model = HDBSCAN(min_cluster_size=mcs).fit(X)
        for c in range(model.n_clusters_):
            assert np.count_nonzero(model.labels_ == c) >= mcs, f"trial {trial}"


def test_criterion_kmeans_reaches_1d_exhaustive_optimum():
    """n<=12, k<=3: best-of-200-seeds inertia hits the exhaustive optimum on >=95/100."""
    rng = np.random.default_rng(20260806)
    hits = 0
    for trial in range(100):
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, min(n, 3) + 1))
        values = rng.uniform(0.0, 10.0, size=n)
        X = values[:, None]
        best = min(
            KMeans(n_clusters=k, seed=seed, tol=0.0).fit(X).inertia_
            for seed in range(200)
        )
        optimum = best_1d_kmeans_inertia(values, k)
        if abs(best - optimum) <= 1e-9 * max(1.0, optimum):
            hits += 1
    assert hits >= 95, f"only {hits}/100 instances reached the optimum"


def test_criterion_ari_matches_pair_counting_oracle():
    """500 random label pairs (n<=50): exact equality, plus ARI=1 on permutations."""
    rng = np.random.default_rng(20260807)
    for trial in range(500):
        n = int(rng.integers(2, 51))
        t = rng.integers(0, int(rng.integers(1, 6)) + 1, size=n)
        p = rng.integers(-1, int(rng.integers(0, 5)) + 1, size=n)
        assert adjusted_rand_index(t, p) == ari_pair_oracle(list(t), list(p)), f"trial {trial}"
    # permuted identical partitions score exactly 1
    labels = rng.integers(0, 4, size=30)
    table = rng.permutation(4)
    assert adjusted_rand_index(labels, table[labels]) == 1.0


def test_criterion_silhouette_matches_naive_oracle():
    """Random labelings under both noise policies agree with the per-point oracle to 1e-9."""
    rng = np.random.default_rng(20260808)
    for trial in range(60):
        n = int(rng.integers(4, 45))
        X = rng.normal(size=(n, int(rng.integers(1, 5))))
        labels = rng.integers(-1, 4, size=n)
        D = pairwise_distances(X)
        for policy, flag in (
            (NoisePolicy.EXCLUDE_NOISE, True),
            (NoisePolicy.NOISE_AS_CLUSTER, False),
        ):
            got = silhouette(D, labels, policy)
            want = silhouette_oracle(D.to_square(), list(labels), exclude_noise=flag)
            if want is None:
                assert got is None
            else:
                assert abs(got - want) <= 1e-9, f"trial {trial}"


def test_criterion_purity_matches_majority_oracle():
    """Random labelings: exact equality with the majority-count oracle."""
    rng = np.random.default_rng(20260809)
    for trial in range(200):
        n = int(rng.integers(2, 50))
        t = rng.integers(1, 6, size=n)
        p = rng.integers(-1, 5, size=n)
        for policy, flag in (
            (NoisePolicy.EXCLUDE_NOISE, True),
            (NoisePolicy.NOISE_AS_CLUSTER, False),
        ):
            got = purity(t, p, policy)
            want = purity_oracle(list(t), list(p), exclude_noise=flag)
            assert got == want, f"trial {trial}"


def test_criterion_sweep_reports_are_deterministic(tmp_path):
    """Identical SweepConfig: byte-identical reports (modulo timestamp) across jobs."""
    path = tmp_path / "blobs.csv"
    write_embeddings(three_blobs(n_per=40), path)
    outputs = []
    for jobs in (1, 4, 1):
        cfg = SweepConfig(
            algorithm="kmeans",
            embeddings=(str(path),),
            grid=(2, 3, 4),
            seeds=(1, 2, 3, 4, 5),
            jobs=jobs,
            output_path="unused",
        )
        report = run_sweep(cfg)
        report.metadata["timestamp"] = "<fixed>"
        report.metadata["config"]["jobs"] = 0  # jobs may not affect content
        out = tmp_path / f"report_{len(outputs)}.csv"
        emit_report(report, out, "csv")
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


@pytest.fixture(scope="module")
def blob_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("accept") / "blobs.csv"
    write_embeddings(three_blobs(n_per=100, d=10, sigma=0.5), path)
    return path


def test_criterion_synthetic_kmeans_silhouette_argmax_at_three(blob_file):
    """3 Gaussian blobs: silhouette argmax over k in 3..19 is 3, mean silhouette > 0.7."""
    cfg = SweepConfig(
        algorithm="kmeans",
        embeddings=(str(blob_file),),
        grid=tuple(range(3, 20)),
        seeds=tuple(range(1, 11)),
        output_path="unused",
        jobs=2,
    )
    report = run_sweep(cfg)
    means = {agg.value: agg.means["silhouette"] for agg in report.aggregates}
    best_k = max(means, key=lambda v: (means[v], -v))
    assert best_k == 3.0
    assert means[3.0] > 0.7


def test_criterion_synthetic_dbscan_recovers_three_clusters(blob_file):
    """3 Gaussian blobs: a suitable eps yields exactly 3 clusters with 0 noise."""
    from cluster_bench import load_embeddings, standardize

    ds = standardize(load_embeddings(blob_file))
    model = DBSCAN(eps=1.0, min_samples=5).fit(ds.matrix)
    assert model.n_clusters_ == 3
    assert model.n_noise_ == 0


def test_criterion_synthetic_hdbscan_recovers_three_clusters(blob_file):
    """3 Gaussian blobs: HDBSCAN with min_cluster_size=10 finds 3 clusters."""
    from cluster_bench import load_embeddings, standardize

    ds = standardize(load_embeddings(blob_file))
    model = HDBSCAN(min_cluster_size=10).fit(ds.matrix)
    assert model.n_clusters_ == 3
