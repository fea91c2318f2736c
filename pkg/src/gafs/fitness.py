"""Wrapper fitness: inner-CV accuracy of a classifier on the selected columns.

The score of a feature subset combines mean fold accuracy, an optional
variance penalty, and a reduction reward for dropping features:

    fitness = (1 - alpha) * effectiveness            + alpha * (|F|-|S|)/|F|
    fitness = (1 - alpha) * (effectiveness - var)    + alpha * (|F|-|S|)/|F|
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierSpec, accuracy, train
from .dataset import Dataset, make_folds


@dataclass(frozen=True)
class FitnessConfig:
    classifier: ClassifierSpec
    alpha: float = 0.5
    variance_penalty: bool = False
    inner_folds: int = 10
    fold_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.inner_folds < 2:
            raise ValueError("inner_folds must be >= 2")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "variance_penalty": self.variance_penalty,
            "inner_folds": self.inner_folds,
            "fold_seed": self.fold_seed,
            "classifier": self.classifier.to_dict(),
        }


@dataclass(frozen=True)
class FitnessReport:
    fold_accuracies: tuple[float, ...]
    effectiveness: float       # mean fold accuracy
    variance: float            # population variance of fold accuracies
    num_selected: int
    num_total: int
    fitness: float

    def to_dict(self) -> dict:
        return {
            "fold_accuracies": list(self.fold_accuracies),
            "effectiveness": self.effectiveness,
            "variance": self.variance,
            "num_selected": self.num_selected,
            "num_total": self.num_total,
            "fitness": self.fitness,
        }


def fitness_eq1(effectiveness: float, num_selected: int, num_total: int,
                alpha: float) -> float:
    """Accuracy/reduction trade-off without the variance term."""
    _check_domain(effectiveness, 0.0, num_selected, num_total, alpha)
    return (1.0 - alpha) * effectiveness + alpha * (num_total - num_selected) / num_total


def fitness_eq2(effectiveness: float, variance: float, num_selected: int,
                num_total: int, alpha: float) -> float:
    """Same trade-off with fold-accuracy variance subtracted from effectiveness."""
    _check_domain(effectiveness, variance, num_selected, num_total, alpha)
    return ((1.0 - alpha) * (effectiveness - variance)
            + alpha * (num_total - num_selected) / num_total)


def _check_domain(effectiveness, variance, num_selected, num_total, alpha):
    if not 0.0 <= effectiveness <= 1.0:
        raise ValueError("effectiveness must be in [0, 1]")
    if variance < 0.0:
        raise ValueError("variance must be >= 0")
    if not 0 <= num_selected <= num_total or num_total < 1:
        raise ValueError("need 0 <= num_selected <= num_total and num_total >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")


def evaluate(genotype: np.ndarray, d: Dataset, cfg: FitnessConfig) -> FitnessReport:
    """Score one feature subset by stratified inner-CV accuracy.

    The fold plan depends only on (dataset, inner_folds, fold_seed), so every
    genotype in a run is scored on identical folds and fitness differences
    reflect the subsets alone.
    """
    genotype = np.asarray(genotype, dtype=bool)
    if genotype.shape != (d.n_features,):
        raise ValueError("genotype length must equal n_features")
    if not genotype.any():
        raise ValueError("cannot evaluate an empty feature subset")

    cols = np.flatnonzero(genotype)
    X = d.features[:, cols]
    y = d.labels
    plan = make_folds(d, cfg.inner_folds, seed=cfg.fold_seed, stratified=True)

    fold_acc = []
    for train_idx, test_idx in plan.iter_folds():
        assert not np.intersect1d(train_idx, test_idx).size, "fold leakage"
        model = train(cfg.classifier, X[train_idx], y[train_idx])
        assert model.n_features == len(cols)
        fold_acc.append(accuracy(model.predict(X[test_idx]), y[test_idx]))

    effectiveness = float(np.mean(fold_acc))
    variance = float(np.var(fold_acc))
    ns, nt = int(len(cols)), d.n_features
    if cfg.variance_penalty:
        value = fitness_eq2(effectiveness, variance, ns, nt, cfg.alpha)
    else:
        value = fitness_eq1(effectiveness, ns, nt, cfg.alpha)
    return FitnessReport(
        fold_accuracies=tuple(float(a) for a in fold_acc),
        effectiveness=effectiveness,
        variance=variance,
        num_selected=ns,
        num_total=nt,
        fitness=float(value),
    )


class FitnessEvaluator:
    """Callable wrapper around :func:`evaluate` with a transparent memo cache.

    Keyed on the genotype bits only; dataset and config are fixed per
    instance, matching how a GA run uses it.
    """

    def __init__(self, d: Dataset, cfg: FitnessConfig):
        self.dataset = d
        self.cfg = cfg
        self._cache: dict[bytes, FitnessReport] = {}

    def __call__(self, genotype: np.ndarray) -> FitnessReport:
        key = np.asarray(genotype, dtype=bool).tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = evaluate(genotype, self.dataset, self.cfg)
            self._cache[key] = hit
        return hit
