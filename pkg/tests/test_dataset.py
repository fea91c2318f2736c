import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gafs.dataset import Dataset, DatasetError, load_csv, majority_baseline, make_folds
from gafs.synth import toxicity_shaped_dataset


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestLoadCsv:
    def test_toxicity_shape_and_counts(self, tox_csv):
        d = load_csv(tox_csv)
        assert d.n_instances == 171
        assert d.n_features == 1203
        assert d.class_counts() == (115, 56)
        assert d.class_names == ("NonToxic", "Toxic")

    def test_row_order_preserved(self, tox_csv, tox):
        d = load_csv(tox_csv)
        np.testing.assert_allclose(d.features, tox.features)
        np.testing.assert_array_equal(d.labels, tox.labels)

    def test_minimal_two_row_file(self, tmp_path):
        d = load_csv(_write(tmp_path, "x,cls\n1.0,A\n2.0,B\n"))
        assert d.n_instances == 2
        assert d.n_features == 1
        assert d.class_counts() == (1, 1)

    def test_nan_cell_reports_location(self, tmp_path):
        path = _write(tmp_path, "x,y,cls\n1.0,2.0,A\n1.0,NaN,B\n")
        with pytest.raises(DatasetError, match=r"row 3.*'y'"):
            load_csv(path)

    def test_non_numeric_cell(self, tmp_path):
        path = _write(tmp_path, "x,cls\nfoo,A\n2.0,B\n")
        with pytest.raises(DatasetError, match="foo"):
            load_csv(path)

    def test_missing_file(self):
        with pytest.raises(DatasetError, match="cannot open"):
            load_csv("/no/such/file.csv")

    def test_wrong_class_count(self, tmp_path):
        with pytest.raises(DatasetError, match="expected exactly 2 classes"):
            load_csv(_write(tmp_path, "x,cls\n1,A\n2,B\n3,C\n"))
        with pytest.raises(DatasetError, match="expected exactly 2 classes"):
            load_csv(_write(tmp_path, "x,cls\n1,A\n2,A\n"))

    def test_duplicate_feature_names(self, tmp_path):
        with pytest.raises(DatasetError, match="duplicate"):
            load_csv(_write(tmp_path, "x,x,cls\n1,2,A\n3,4,B\n"))

    def test_label_column_by_name(self, tmp_path):
        d = load_csv(_write(tmp_path, "cls,x\nA,1.0\nB,2.0\n"), label_column="cls")
        assert d.feature_names == ("x",)

    def test_unknown_label_column(self, tmp_path):
        with pytest.raises(DatasetError, match="no column named"):
            load_csv(_write(tmp_path, "x,cls\n1,A\n2,B\n"), label_column="target")

    def test_majority_class_is_id_zero(self, tmp_path):
        d = load_csv(_write(tmp_path, "x,cls\n1,B\n2,B\n3,A\n"))
        assert d.class_names[0] == "B"
        assert majority_baseline(d) == pytest.approx(2 / 3)


class TestMajorityBaseline:
    def test_toxicity_value(self, tox):
        assert majority_baseline(tox) == pytest.approx(115 / 171, abs=1e-12)

    def test_single_class(self):
        d = Dataset(np.zeros((4, 1)), np.zeros(4, dtype=int), ("x",), ("a", "b"))
        assert majority_baseline(d) == 1.0

    def test_balanced(self):
        d = Dataset(np.zeros((4, 1)), np.array([0, 1, 0, 1]), ("x",), ("a", "b"))
        assert majority_baseline(d) == 0.5


class TestMakeFolds:
    def test_171_by_10_stratified_sizes(self, tox):
        plan = make_folds(tox, 10, seed=5, stratified=True)
        sizes = sorted(plan.fold_sizes())
        assert sizes == [17] * 9 + [18]

    def test_171_by_100_plain_sizes(self, tox):
        plan = make_folds(tox, 100, seed=5, stratified=False)
        sizes = np.bincount(plan.fold_sizes())
        assert sizes[1] == 29 and sizes[2] == 71

    def test_leave_one_out(self, tiny_dataset):
        plan = make_folds(tiny_dataset, tiny_dataset.n_instances, seed=0,
                          stratified=False)
        assert (plan.fold_sizes() == 1).all()

    @pytest.mark.parametrize("k", [0, 1])
    def test_k_too_small(self, tiny_dataset, k):
        with pytest.raises(ValueError):
            make_folds(tiny_dataset, k, seed=0)

    def test_k_too_large(self, tiny_dataset):
        with pytest.raises(ValueError):
            make_folds(tiny_dataset, tiny_dataset.n_instances + 1, seed=0)

    def test_determinism(self, tox):
        a = make_folds(tox, 10, seed=99, stratified=True)
        b = make_folds(tox, 10, seed=99, stratified=True)
        assert a.assignments.tobytes() == b.assignments.tobytes()

    def test_partition_property(self, tox):
        for seed in range(10):
            plan = make_folds(tox, 7, seed=seed, stratified=True)
            seen = np.concatenate([plan.test_indices(f) for f in range(7)])
            assert sorted(seen) == list(range(tox.n_instances))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), k=st.integers(2, 20))
    def test_stratification_property(self, seed, k):
        d = toxicity_shaped_dataset(seed=1, n_instances=120, n_features=3,
                                    minority=40)
        plan = make_folds(d, k, seed=seed, stratified=True)
        for cls in (0, 1):
            total = int(np.sum(d.labels == cls))
            share = total / k
            for f in range(k):
                in_fold = int(np.sum(d.labels[plan.test_indices(f)] == cls))
                assert abs(in_fold - share) <= 1

    def test_export_csv(self, tiny_dataset, tmp_path):
        plan = make_folds(tiny_dataset, 4, seed=0)
        out = tmp_path / "plan.csv"
        plan.to_csv(out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "instance_index,fold_id"
        assert len(lines) == tiny_dataset.n_instances + 1
