import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gafs.classifiers import default_spec
from gafs.dataset import make_folds
from gafs.fitness import (
    FitnessConfig,
    FitnessEvaluator,
    evaluate,
    fitness_eq1,
    fitness_eq2,
)


def knn_config(d, **kw):
    return FitnessConfig(classifier=default_spec("KNN", d.n_features), **kw)


class TestClosedForms:
    def test_eq1_worked_value(self):
        v = fitness_eq1(0.7479, 13, 1203, 0.3)
        assert v == pytest.approx(0.7 * 0.7479 + 0.3 * 1190 / 1203, abs=1e-12)
        assert v == pytest.approx(0.8202881, abs=1e-7)

    def test_eq2_worked_value(self):
        v = fitness_eq2(0.66, 0.01, 4, 1203, 0.5)
        assert v == pytest.approx(0.5 * 0.65 + 0.5 * 1199 / 1203, abs=1e-12)
        assert v == pytest.approx(0.8233375, abs=1e-7)

    def test_alpha_zero_is_effectiveness(self):
        assert fitness_eq1(0.42, 10, 30, 0.0) == 0.42

    def test_alpha_one_empty_set(self):
        assert fitness_eq1(0.9, 0, 50, 1.0) == 1.0

    def test_eq2_zero_variance_matches_eq1(self):
        assert fitness_eq2(0.8, 0.0, 5, 20, 0.4) == fitness_eq1(0.8, 5, 20, 0.4)

    def test_eq2_alpha_one_ignores_variance(self):
        assert fitness_eq2(0.3, 0.2, 5, 20, 1.0) == fitness_eq2(0.9, 0.0, 5, 20, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(eff=st.floats(0, 1), var=st.floats(0, 0.25),
           total=st.integers(1, 2000), alpha=st.floats(0, 1),
           frac=st.floats(0, 1))
    def test_matches_independent_recomputation(self, eff, var, total, alpha, frac):
        sel = int(round(frac * total))
        reduction = (total - sel) / total
        assert fitness_eq1(eff, sel, total, alpha) == pytest.approx(
            eff - alpha * eff + alpha * reduction, abs=1e-12)
        assert fitness_eq2(eff, var, sel, total, alpha) == pytest.approx(
            (eff - var) - alpha * (eff - var) + alpha * reduction, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(eff=st.floats(0, 1), var=st.floats(0.001, 0.25),
           alpha=st.floats(0, 0.999), sel=st.integers(0, 20))
    def test_eq2_below_eq1_with_variance(self, eff, var, alpha, sel):
        assert fitness_eq2(eff, var, sel, 20, alpha) < fitness_eq1(eff, sel, 20, alpha)

    def test_monotone_in_reduction(self):
        values = [fitness_eq1(0.7, s, 50, 0.5) for s in range(0, 51)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("args", [
        (1.2, 5, 10, 0.5), (0.5, 11, 10, 0.5), (0.5, -1, 10, 0.5),
        (0.5, 5, 0, 0.5), (0.5, 5, 10, 1.5),
    ])
    def test_domain_errors(self, args):
        with pytest.raises(ValueError):
            fitness_eq1(*args)
        with pytest.raises(ValueError):
            fitness_eq2(args[0], 0.0, *args[1:])


class TestEvaluate:
    def test_report_self_consistent(self, planted):
        cfg = knn_config(planted, alpha=0.5)
        r = evaluate(np.ones(planted.n_features, bool), planted, cfg)
        assert r.effectiveness >= 0.5
        assert r.effectiveness == pytest.approx(np.mean(r.fold_accuracies), abs=1e-12)
        assert r.variance == pytest.approx(np.var(r.fold_accuracies), abs=1e-12)
        assert 0.0 <= r.variance <= 0.25
        assert r.fitness == pytest.approx(
            fitness_eq1(r.effectiveness, r.num_selected, r.num_total, 0.5), abs=1e-12)

    def test_variance_penalty_path(self, planted):
        cfg = knn_config(planted, alpha=0.3, variance_penalty=True)
        r = evaluate(np.ones(planted.n_features, bool), planted, cfg)
        assert r.fitness == pytest.approx(
            fitness_eq2(r.effectiveness, r.variance, r.num_selected, r.num_total, 0.3),
            abs=1e-12)

    def test_constant_feature_matches_simulation(self, planted):
        # a constant column makes 1-NN degenerate: every training point is
        # equidistant, so the stable tie rule picks the lowest training index
        d = planted
        X = d.features.copy()
        X.setflags(write=True)
        X[:, 0] = 1.0
        from gafs.dataset import Dataset
        const = Dataset(X, d.labels, d.feature_names, d.class_names)
        bits = np.zeros(const.n_features, bool)
        bits[0] = True
        cfg = knn_config(const, alpha=0.0, fold_seed=9)
        r = evaluate(bits, const, cfg)

        plan = make_folds(const, cfg.inner_folds, seed=cfg.fold_seed, stratified=True)
        expected = []
        for train_idx, test_idx in plan.iter_folds():
            pred = const.labels[train_idx[0]]
            expected.append(float(np.mean(const.labels[test_idx] == pred)))
        assert list(r.fold_accuracies) == pytest.approx(expected, abs=1e-12)

    def test_determinism_bit_identical(self, planted):
        cfg = knn_config(planted, alpha=0.5, fold_seed=4)
        bits = np.zeros(planted.n_features, bool)
        bits[[1, 5, 9]] = True
        assert evaluate(bits, planted, cfg) == evaluate(bits, planted, cfg)

    def test_empty_genotype_rejected(self, planted):
        with pytest.raises(ValueError, match="empty"):
            evaluate(np.zeros(planted.n_features, bool), planted,
                     knn_config(planted))

    def test_wrong_length_rejected(self, planted):
        with pytest.raises(ValueError, match="length"):
            evaluate(np.ones(3, bool), planted, knn_config(planted))

    def test_memoization_is_invisible(self, planted):
        cfg = knn_config(planted, alpha=0.5)
        ev = FitnessEvaluator(planted, cfg)
        bits = np.zeros(planted.n_features, bool)
        bits[[3, 7]] = True
        first = ev(bits)
        second = ev(bits)
        assert first is second
        assert first == evaluate(bits, planted, cfg)

    def test_config_validation(self, planted):
        with pytest.raises(ValueError):
            knn_config(planted, alpha=1.5)
        with pytest.raises(ValueError):
            knn_config(planted, inner_folds=1)
