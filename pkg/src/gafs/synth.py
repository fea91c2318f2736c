"""Synthetic datasets for benchmarks and tests.

``planted_dataset`` hides a noiseless 3-feature signal among noise columns;
``toxicity_shaped_dataset`` mimics the molecular-descriptor benchmark's shape
(171 instances, 1203 features, a 115/56 class split) for runs where the real
CSV is not on disk.
"""

from __future__ import annotations

import csv

import numpy as np

from .dataset import Dataset

PLANTED_FEATURES = (3, 7, 12)


def planted_dataset(n_instances: int = 200, n_features: int = 20,
                    seed: int = 0,
                    planted: tuple[int, ...] | None = None) -> Dataset:
    """Labels are the majority vote of the signs of three planted features.

    Every other column is independent noise, so the planted triple is the
    unique informative subset.
    """
    if planted is None:
        planted = PLANTED_FEATURES if n_features > max(PLANTED_FEATURES) \
            else (0, 1, min(2, n_features - 1))
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n_instances, n_features))
    signs = X[:, list(planted)] > 0.0
    y_raw = (signs.sum(axis=1) >= 2).astype(np.int64)
    # majority class must be id 0
    y = y_raw if np.sum(y_raw == 0) >= np.sum(y_raw == 1) else 1 - y_raw
    return Dataset(
        features=X,
        labels=y,
        feature_names=tuple(f"f{i:02d}" for i in range(n_features)),
        class_names=("neg", "pos"),
    )


def toxicity_shaped_dataset(seed: int = 0, n_instances: int = 171,
                            n_features: int = 1203,
                            minority: int = 56) -> Dataset:
    """Stand-in with the benchmark's exact shape and class split.

    Eight descriptor columns carry a class-mean shift so nearest-neighbour
    models have real signal to find; the rest are noise.
    """
    rng = np.random.default_rng(seed)
    y = np.zeros(n_instances, dtype=np.int64)
    y[rng.choice(n_instances, size=minority, replace=False)] = 1
    X = rng.normal(0.0, 1.0, size=(n_instances, n_features))
    n_informative = min(6, n_features)
    informative = rng.choice(n_features, size=n_informative, replace=False)
    # weak per-feature shifts: extra noise columns measurably dilute
    # nearest-neighbour accuracy, as on the real descriptor data
    X[:, informative] += np.outer(y * 2.0 - 1.0,
                                  rng.uniform(0.45, 0.7, size=n_informative))
    return Dataset(
        features=X,
        labels=y,
        feature_names=tuple(f"desc{i:04d}" for i in range(n_features)),
        class_names=("NonToxic", "Toxic"),
    )


def write_csv(d: Dataset, path, label_name: str = "Class") -> None:
    """Write a dataset in the loader's CSV dialect (label in the last column)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(d.feature_names) + [label_name])
        for row, label in zip(d.features, d.labels):
            w.writerow([repr(float(v)) for v in row] + [d.class_names[label]])
