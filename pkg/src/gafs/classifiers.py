"""From-scratch classifiers behind one train/predict interface.

kNN, a CART-style decision tree on Gini impurity, and bagged/extra-random
forests built on that tree.  Everything is deterministic given the spec's
seed, including forest bootstraps and per-node feature sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class Kind(str, Enum):
    KNN = "KNN"
    DTC = "DTC"
    RFC = "RFC"
    ETC = "ETC"


@dataclass(frozen=True)
class ClassifierSpec:
    """Hyperparameters for one classifier.

    Fields irrelevant to ``kind`` are ignored at training time but kept
    verbatim so reports can echo the full configuration.
    """

    kind: Kind
    k_neighbors: int = 1
    max_depth: int | None = None          # None = unlimited
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_features: int | None = None       # None = all features
    n_estimators: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.min_samples_leaf > self.min_samples_split:
            raise ValueError("min_samples_leaf must be <= min_samples_split")
        if self.k_neighbors < 1 or self.n_estimators < 1:
            raise ValueError("k_neighbors and n_estimators must be positive")

    def with_seed(self, seed: int) -> "ClassifierSpec":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "k_neighbors": self.k_neighbors,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
            "max_features": self.max_features,
            "n_estimators": self.n_estimators,
            "seed": self.seed,
        }


def default_spec(kind: Kind | str, n_features: int, seed: int = 0) -> ClassifierSpec:
    """Specs used inside GA fitness: 1-NN, unconstrained tree, 100-tree forests."""
    kind = Kind(kind)
    if kind is Kind.KNN:
        return ClassifierSpec(kind=kind, k_neighbors=1, seed=seed)
    if kind is Kind.DTC:
        return ClassifierSpec(kind=kind, seed=seed)
    mf = max(1, int(np.floor(np.sqrt(n_features))))
    return ClassifierSpec(kind=kind, n_estimators=100, max_features=mf, seed=seed)


def accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape or predicted.size == 0:
        raise ValueError("predicted and truth must be equal-length and non-empty")
    return float(np.mean(predicted == truth))


def gini(y: np.ndarray) -> float:
    """Gini impurity of a label vector."""
    if len(y) == 0:
        return 0.0
    counts = np.bincount(y)
    p = counts / len(y)
    return float(1.0 - np.sum(p * p))


def _majority(y: np.ndarray) -> int:
    """Most frequent label; ties go to the lower class id."""
    return int(np.bincount(y, minlength=2).argmax())


# --------------------------------------------------------------------------
# kNN
# --------------------------------------------------------------------------

class _KnnModel:
    def __init__(self, spec, X, y):
        self.spec = spec
        self.X = X
        self.y = y
        self.default = _majority(y)
        self.k = min(spec.k_neighbors, len(y))

    def predict(self, X):
        # stable argsort: equidistant neighbours at the k-boundary resolve
        # to the lower training index
        d2 = (
            (X * X).sum(axis=1)[:, None]
            - 2.0 * X @ self.X.T
            + (self.X * self.X).sum(axis=1)[None, :]
        )
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        votes = self.y[nearest]
        ones = votes.sum(axis=1)
        zeros = self.k - ones
        out = np.where(ones > zeros, 1, np.where(zeros > ones, 0, self.default))
        return out.astype(np.int64)


# --------------------------------------------------------------------------
# CART tree
# --------------------------------------------------------------------------

class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "label")

    def __init__(self, feature=-1, threshold=0.0, left=None, right=None, label=-1):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.label = label


def _best_split(X, y, feature_ids, min_leaf):
    """Best (impurity decrease, feature, threshold) over candidate features.

    Thresholds are midpoints between consecutive distinct sorted values.
    Ties resolve to the lowest feature index, then the lowest threshold,
    which the ascending scan with strict improvement yields for free.
    """
    n = len(y)
    parent = gini(y)
    best_gain, best_f, best_t = 0.0, -1, 0.0
    for f in feature_ids:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[order]
        ones_left = np.cumsum(ys)          # ones among first i+1 samples
        total_ones = ones_left[-1]
        # split after position i (left = first i+1 samples)
        i = np.arange(1, n)
        valid = xs[1:] > xs[:-1]
        valid &= (i >= min_leaf) & (n - i >= min_leaf)
        if not valid.any():
            continue
        nl = i[valid].astype(np.float64)
        nr = n - nl
        ol = ones_left[:-1][valid].astype(np.float64)
        orr = total_ones - ol
        gl = 1.0 - ((ol / nl) ** 2 + ((nl - ol) / nl) ** 2)
        gr = 1.0 - ((orr / nr) ** 2 + ((nr - orr) / nr) ** 2)
        gain = parent - (nl * gl + nr * gr) / n
        j = int(np.argmax(gain))
        if gain[j] > best_gain + 1e-15:
            pos = i[valid][j]
            best_gain = float(gain[j])
            best_f = int(f)
            best_t = float((xs[pos - 1] + xs[pos]) / 2.0)
    return best_gain, best_f, best_t


def _best_random_split(X, y, feature_ids, min_leaf, rng):
    """Extra-trees split: one uniform random threshold per candidate feature."""
    n = len(y)
    parent = gini(y)
    best_gain, best_f, best_t = 0.0, -1, 0.0
    for f in feature_ids:
        x = X[:, f]
        lo, hi = float(x.min()), float(x.max())
        if hi <= lo:
            continue
        t = float(rng.uniform(lo, hi))
        left = x <= t
        nl = int(left.sum())
        if nl < min_leaf or n - nl < min_leaf:
            continue
        gain = parent - (nl * gini(y[left]) + (n - nl) * gini(y[~left])) / n
        if gain > best_gain + 1e-15:
            best_gain, best_f, best_t = float(gain), int(f), t
    return best_gain, best_f, best_t


class _TreeModel:
    def __init__(self, spec, X, y, rng=None, random_splits=False):
        self.spec = spec
        self.n_features = X.shape[1]
        self.default = _majority(y)
        self.importances = np.zeros(self.n_features)
        self._rng = rng if rng is not None else np.random.default_rng(_seed_seq(spec.seed))
        self._random_splits = random_splits
        self._n_total = len(y)
        self.root = self._build(X, y, depth=0)
        tot = self.importances.sum()
        if tot > 0:
            self.importances /= tot

    def _build(self, X, y, depth):
        n = len(y)
        counts = np.bincount(y, minlength=2)
        # leaf vote tie falls back to the whole training set's majority
        label = self.default if counts[0] == counts[1] else int(counts.argmax())
        node = _Node(label=label)
        if (
            n < self.spec.min_samples_split
            or (self.spec.max_depth is not None and depth >= self.spec.max_depth)
            or gini(y) == 0.0
        ):
            return node

        mf = self.spec.max_features
        if mf is None or mf >= self.n_features:
            feature_ids = np.arange(self.n_features)
        else:
            feature_ids = np.sort(self._rng.choice(self.n_features, size=mf, replace=False))

        if self._random_splits:
            gain, f, t = _best_random_split(X, y, feature_ids, self.spec.min_samples_leaf,
                                            self._rng)
        else:
            gain, f, t = _best_split(X, y, feature_ids, self.spec.min_samples_leaf)
        if f < 0:
            return node

        left = X[:, f] <= t
        self.importances[f] += (n / self._n_total) * gain
        node.feature = f
        node.threshold = t
        node.left = self._build(X[left], y[left], depth + 1)
        node.right = self._build(X[~left], y[~left], depth + 1)
        return node

    def predict(self, X):
        out = np.empty(len(X), dtype=np.int64)
        for i, row in enumerate(X):
            node = self.root
            while node.feature >= 0:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.label
        return out


# --------------------------------------------------------------------------
# Forests
# --------------------------------------------------------------------------

class _ForestModel:
    def __init__(self, spec, X, y, bootstrap, random_splits):
        self.spec = spec
        self.default = _majority(y)
        n = len(y)
        self.trees = []
        for t in range(spec.n_estimators):
            rng = np.random.default_rng(_seed_seq(spec.seed, t))
            if bootstrap:
                idx = rng.integers(0, n, size=n)
                Xt, yt = X[idx], y[idx]
            else:
                Xt, yt = X, y
            self.trees.append(_TreeModel(spec, Xt, yt, rng=rng, random_splits=random_splits))
        self.importances = np.mean([t.importances for t in self.trees], axis=0)

    def predict(self, X):
        votes = np.sum([t.predict(X) for t in self.trees], axis=0)
        half = len(self.trees) / 2.0
        out = np.where(votes > half, 1, np.where(votes < half, 0, self.default))
        return out.astype(np.int64)


def _seed_seq(seed: int, *extra: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *extra])


# --------------------------------------------------------------------------
# Public interface
# --------------------------------------------------------------------------

class TrainedModel:
    """A fitted classifier; immutable, safe to share for concurrent predicts."""

    def __init__(self, spec: ClassifierSpec, impl, n_features: int):
        self.spec = spec
        self._impl = impl
        self.n_features = n_features

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} feature columns, got "
                f"{X.shape[1] if X.ndim == 2 else 'non-matrix input'}"
            )
        return self._impl.predict(X)

    @property
    def feature_importances(self) -> np.ndarray:
        imp = getattr(self._impl, "importances", None)
        if imp is None:
            raise ValueError(f"{self.spec.kind.value} has no feature importances")
        return imp


def train(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray) -> TrainedModel:
    """Fit ``spec`` on (X, y).  Pure function of its arguments."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError("X must be a non-empty 2-d matrix")
    if y.shape != (X.shape[0],):
        raise ValueError("y length must match X rows")

    if spec.kind is Kind.KNN:
        impl = _KnnModel(spec, X.copy(), y.copy())
    elif spec.kind is Kind.DTC:
        impl = _TreeModel(spec, X, y)
    elif spec.kind is Kind.RFC:
        impl = _ForestModel(spec, X, y, bootstrap=True, random_splits=False)
    else:
        impl = _ForestModel(spec, X, y, bootstrap=False, random_splits=True)
    return TrainedModel(spec, impl, X.shape[1])


def predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    return model.predict(X)
