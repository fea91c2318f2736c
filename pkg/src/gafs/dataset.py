"""Tabular binary-classification data: loading, validation and fold plans."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


class DatasetError(ValueError):
    """Raised when an input file violates the dataset contract."""


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix with binary labels.

    Class id 0 is always the majority class, so the majority baseline is
    computable from ``labels`` alone.
    """

    features: np.ndarray          # (n_instances, n_features) float64
    labels: np.ndarray            # (n_instances,) int64 in {0, 1}
    feature_names: tuple[str, ...]
    class_names: tuple[str, str]

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        y = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
            raise DatasetError("feature matrix must be 2-d with >=2 rows and >=1 column")
        if y.shape != (X.shape[0],):
            raise DatasetError("labels must align with feature rows")
        if not np.isfinite(X).all():
            raise DatasetError("feature matrix contains non-finite values")
        if not np.isin(y, (0, 1)).all():
            raise DatasetError("labels must be 0/1")
        if len(self.feature_names) != X.shape[1]:
            raise DatasetError("feature_names length must equal n_features")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DatasetError("feature_names must be unique")
        X.setflags(write=False)
        y.setflags(write=False)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

    def restrict(self, columns: np.ndarray) -> "Dataset":
        """New dataset keeping only the given feature columns (row order kept)."""
        cols = np.asarray(columns, dtype=np.intp)
        return Dataset(
            features=self.features[:, cols],
            labels=self.labels,
            feature_names=tuple(self.feature_names[c] for c in cols),
            class_names=self.class_names,
        )

    def subset(self, rows: np.ndarray) -> "Dataset":
        """New dataset keeping only the given instance rows (order kept)."""
        idx = np.asarray(rows, dtype=np.intp)
        return Dataset(
            features=self.features[idx],
            labels=self.labels[idx],
            feature_names=self.feature_names,
            class_names=self.class_names,
        )


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every instance to exactly one cross-validation fold."""

    n_folds: int
    assignments: np.ndarray       # (n_instances,) fold id in [0, n_folds)
    seed: int
    stratified: bool

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", a)
        a.setflags(write=False)
        if a.min() < 0 or a.max() >= self.n_folds:
            raise ValueError("fold ids out of range")
        sizes = np.bincount(a, minlength=self.n_folds)
        if sizes.max() - sizes.min() > 1:
            raise ValueError("fold sizes differ by more than 1")

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.n_folds)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def iter_folds(self):
        for f in range(self.n_folds):
            yield self.train_indices(f), self.test_indices(f)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["instance_index", "fold_id"])
            for i, f in enumerate(self.assignments):
                w.writerow([i, int(f)])


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Load a delimited file with a header row into a :class:`Dataset`.

    The label column is ``label_column`` by name, or the last column when
    omitted.  Exactly two label values must occur; the majority value becomes
    class id 0.  Any cell that does not parse as a finite number is rejected
    with its row/column location.
    """
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise DatasetError(f"cannot open {path}: {e.strerror}") from e
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        rows = list(reader)

    header = [h.strip() for h in header]
    if label_column is None:
        label_idx = len(header) - 1
    else:
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise DatasetError(f"{path}: no column named {label_column!r}") from None

    feature_names = [h for i, h in enumerate(header) if i != label_idx]
    if len(set(feature_names)) != len(feature_names):
        dup = sorted({n for n in feature_names if feature_names.count(n) > 1})
        raise DatasetError(f"{path}: duplicate feature column name(s): {', '.join(dup)}")

    n = len(rows)
    if n < 2:
        raise DatasetError(f"{path}: need at least 2 data rows, got {n}")

    X = np.empty((n, len(feature_names)), dtype=np.float64)
    raw_labels = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DatasetError(f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}")
        c = 0
        for j, cell in enumerate(row):
            if j == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                v = float(cell)
            except ValueError:
                v = np.nan
            if not np.isfinite(v):
                raise DatasetError(
                    f"{path}: non-numeric value {cell.strip()!r} at row {r + 2}, "
                    f"column {header[j]!r}"
                )
            X[r, c] = v
            c += 1

    classes = sorted(set(raw_labels))
    if len(classes) != 2:
        raise DatasetError(f"{path}: expected exactly 2 classes, found {len(classes)}: {classes}")
    counts = {c: raw_labels.count(c) for c in classes}
    # majority class gets id 0; deterministic tie-break by name order
    ordered = sorted(classes, key=lambda c: (-counts[c], c))
    to_id = {c: i for i, c in enumerate(ordered)}
    y = np.fromiter((to_id[v] for v in raw_labels), dtype=np.int64, count=n)

    return Dataset(features=X, labels=y, feature_names=tuple(feature_names),
                   class_names=(ordered[0], ordered[1]))


def majority_baseline(d: Dataset) -> float:
    """Accuracy of always predicting the most frequent class."""
    counts = np.bincount(d.labels, minlength=2)
    return float(counts.max() / d.n_instances)


def make_folds(d: Dataset, k: int, seed: int, stratified: bool = True) -> FoldPlan:
    """Deterministic fold plan for ``d``.

    Plain plans shuffle all instances and deal them into balanced folds.
    Stratified plans distribute each class separately, always giving the
    remainder of a class to the currently least-loaded folds so total fold
    sizes still differ by at most 1.
    """
    n = d.n_instances
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds n_instances={n}")

    rng = np.random.default_rng(np.random.SeedSequence([_u64(seed), k, int(stratified)]))
    assignments = np.empty(n, dtype=np.int64)

    if not stratified:
        order = rng.permutation(n)
        base, extra = divmod(n, k)
        sizes = np.full(k, base)
        sizes[:extra] += 1
        assignments[order] = np.repeat(np.arange(k), sizes)
        return FoldPlan(n_folds=k, assignments=assignments, seed=seed, stratified=False)

    loads = np.zeros(k, dtype=np.int64)
    class_ids = np.unique(d.labels)
    # larger classes first so their remainders set the load baseline
    class_ids = sorted(class_ids, key=lambda c: -int(np.sum(d.labels == c)))
    for c in class_ids:
        members = np.flatnonzero(d.labels == c)
        members = members[rng.permutation(len(members))]
        base, extra = divmod(len(members), k)
        counts = np.full(k, base)
        if extra:
            # least-loaded folds take the remainder; rotate ties by seed
            tiebreak = rng.permutation(k)
            order = np.lexsort((tiebreak, loads))
            counts[order[:extra]] += 1
        assignments[members] = np.repeat(np.arange(k), counts)
        loads += counts
    return FoldPlan(n_folds=k, assignments=assignments, seed=seed, stratified=True)


def _u64(seed: int) -> int:
    return int(seed) & 0xFFFFFFFFFFFFFFFF
