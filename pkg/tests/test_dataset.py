import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cluster_bench import (
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
from conftest import make_dataset


class TestEmbeddingDataset:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError, match="agree"):
            EmbeddingDataset(ids=["a"], ratings=[1, 2], matrix=[[0.0], [1.0]])
        with pytest.raises(ValueError, match="ratings"):
            make_dataset([[0.0], [1.0]], ratings=[0, 1])
        with pytest.raises(ValueError, match="non-finite"):
            make_dataset([[np.nan], [1.0]])

    def test_kind_dimensionality_checked(self):
        with pytest.raises(ValueError, match="300-dimensional"):
            make_dataset(np.zeros((2, 5)), kind=EmbeddingKind.W2V_AVG)
        ds = make_dataset(np.zeros((2, 300)), kind=EmbeddingKind.W2V_AVG)
        assert ds.n_dims == 300

    def test_matrix_is_immutable(self):
        ds = make_dataset([[1.0, 2.0], [3.0, 4.0]])
        with pytest.raises(ValueError):
            ds.matrix[0, 0] = 9.0


class TestLoadWrite:
    def test_roundtrip_identity(self, tmp_path):
        ds = make_dataset(np.random.default_rng(0).normal(size=(3, 2)))
        path = tmp_path / "tiny.csv"
        write_embeddings(ds, path)
        back = load_embeddings(path)
        assert back.ids == ds.ids
        assert np.array_equal(back.ratings, ds.ratings)
        assert np.array_equal(back.matrix, ds.matrix)  # bit-exact

    def test_rating_out_of_range_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "id,rating,e0\n" "a,1,0.5\n" "b,2,0.5\n" "c,0,0.5\n", encoding="utf-8"
        )
        with pytest.raises(EmbeddingParseError, match="line 4"):
            load_embeddings(path)

    def test_ragged_row_names_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("id,rating,e0,e1\na,1,0.5,0.5\nb,2,0.5\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="line 3"):
            load_embeddings(path)

    def test_non_numeric_cell_names_line(self, tmp_path):
        path = tmp_path / "nonnum.csv"
        path.write_text("id,rating,e0\na,1,zap\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="line 2"):
            load_embeddings(path)

    def test_non_finite_cell_names_line(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("id,rating,e0\na,1,0.5\nb,2,nan\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="line 3"):
            load_embeddings(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("identifier,stars,e0\na,1,0.5\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="line 1"):
            load_embeddings(path)

    def test_comment_lines_skipped(self, tmp_path):
        path = tmp_path / "commented.csv"
        path.write_text(
            "# model=bert-base-uncased@1\nid,rating,e0\na,5,1.5\nb,1,-0.5\n",
            encoding="utf-8",
        )
        ds = load_embeddings(path)
        assert ds.n_samples == 2

    def test_kind_inferred_from_filename(self, tmp_path):
        ds = make_dataset(np.zeros((2, 300)))
        path = tmp_path / "reviews_w2v_avg.csv"
        write_embeddings(ds, path)
        assert load_embeddings(path).kind is EmbeddingKind.W2V_AVG
        assert infer_kind_from_path("x_bert_cls.csv") is EmbeddingKind.BERT_CLS
        assert infer_kind_from_path("whatever.csv") is EmbeddingKind.OTHER

    def test_row_order_preserved(self, tmp_path):
        ds = make_dataset([[3.0], [1.0], [2.0]], ratings=[5, 1, 3])
        path = tmp_path / "ordered.csv"
        write_embeddings(ds, path)
        back = load_embeddings(path)
        assert list(back.matrix[:, 0]) == [3.0, 1.0, 2.0]
        assert list(back.ratings) == [5, 1, 3]


class TestStandardize:
    def test_constant_column_becomes_zero(self):
        ds = make_dataset([[5.0], [5.0], [5.0]])
        assert np.array_equal(standardize(ds).matrix, np.zeros((3, 1)))

    def test_hand_computed_column(self):
        # mean 2, population std sqrt(2/3)
        ds = make_dataset([[1.0], [2.0], [3.0]])
        out = standardize(ds).matrix[:, 0]
        np.testing.assert_allclose(out, [-1.224745, 0.0, 1.224745], atol=1e-6)

    def test_moments(self):
        rng = np.random.default_rng(3)
        ds = make_dataset(rng.normal(2.0, 5.0, size=(40, 6)))
        out = standardize(ds).matrix
        assert np.abs(out.mean(axis=0)).max() < 1e-9
        np.testing.assert_allclose(out.std(axis=0), 1.0, atol=1e-9)

    def test_idempotent(self):
        rng = np.random.default_rng(4)
        ds = make_dataset(rng.normal(size=(25, 4)))
        once = standardize(ds)
        twice = standardize(once)
        np.testing.assert_allclose(twice.matrix, once.matrix, atol=1e-9)

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            standardize(make_dataset([[1.0]], ratings=[1]))

    def test_ids_ratings_unchanged(self):
        ds = make_dataset([[1.0], [4.0]], ratings=[2, 5])
        out = standardize(ds)
        assert out.ids == ds.ids
        assert np.array_equal(out.ratings, ds.ratings)

    def test_transformer_api(self):
        X = np.array([[1.0, 7.0], [3.0, 7.0]])
        tf = Standardizer().fit(X)
        assert tf.get_params() == {}
        out = tf.transform(X)
        np.testing.assert_allclose(out[:, 0], [-1.0, 1.0])
        assert np.array_equal(out[:, 1], [0.0, 0.0])


class TestRatingTransform:
    def test_case_mapping(self):
        assert list(transform_ratings_to_three([1, 2, 3, 4, 5])) == [1, 1, 2, 3, 3]

    def test_empty(self):
        assert list(transform_ratings_to_three([])) == []

    def test_all_threes(self):
        assert list(transform_ratings_to_three([3, 3, 3])) == [2, 2, 2]

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            transform_ratings_to_three([0])
        with pytest.raises(ValueError):
            transform_ratings_to_three([6])

    @given(st.lists(st.integers(min_value=1, max_value=5), min_size=2, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_monotone(self, ratings):
        out = transform_ratings_to_three(ratings)
        order = np.argsort(ratings, kind="stable")
        assert (np.diff(out[order]) >= 0).all()

    def test_labels_for(self):
        ds = make_dataset([[0.0], [0.0]], ratings=[2, 4])
        assert list(ds.labels_for(LabelScheme.FIVE_CLASS)) == [2, 4]
        assert list(ds.labels_for(LabelScheme.THREE_CLASS)) == [1, 3]
