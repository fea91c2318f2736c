"""Experiment layer: nested cross-validation, grid search, RFE and sweeps.

All selection and tuning happen strictly inside the outer-training partition;
outer-test instances only ever see a finished model.  Every task carries a
seed derived from (master seed, repetition, fold), so runs are reproducible
and independent of worker count.
"""

from __future__ import annotations

import csv
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classifiers import ClassifierSpec, Kind, accuracy, train
from .dataset import Dataset, FoldPlan, majority_baseline, make_folds
from .fitness import FitnessConfig, FitnessEvaluator
from .ga import EvolutionLog, GaConfig, evolve


@dataclass(frozen=True)
class NestedCvSpec:
    outer_folds: int = 100
    inner_folds: int = 10
    repetitions: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.outer_folds < 2 or self.inner_folds < 2 or self.repetitions < 1:
            raise ValueError("outer_folds/inner_folds >= 2 and repetitions >= 1 required")

    def to_dict(self) -> dict:
        return {
            "outer_folds": self.outer_folds,
            "inner_folds": self.inner_folds,
            "repetitions": self.repetitions,
            "seed": self.seed,
        }


def derive_seed(*parts: int) -> int:
    """Stable 64-bit seed from integer context (master seed, repetition, fold...)."""
    clean = [int(p) & 0xFFFFFFFFFFFFFFFF for p in parts]
    return int(np.random.SeedSequence(clean).generate_state(1, dtype=np.uint64)[0])


# --------------------------------------------------------------------------
# Selectors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Selection:
    indices: tuple[int, ...]            # positions within the dataset handed in
    inner_fold_accuracies: tuple[float, ...] | None = None
    log: EvolutionLog | None = None


@dataclass(frozen=True)
class FixedListSelector:
    """Always returns the same feature names (resolved per dataset)."""

    feature_names: tuple[str, ...]
    tag: str = "fixed"

    def select(self, d: Dataset, seed: int, inner_folds: int) -> Selection:
        lookup = {name: i for i, name in enumerate(d.feature_names)}
        missing = [n for n in self.feature_names if n not in lookup]
        if missing:
            raise ValueError(f"unknown feature name(s): {', '.join(missing)}")
        return Selection(indices=tuple(lookup[n] for n in self.feature_names))


@dataclass(frozen=True)
class RfeSelector:
    target_count: int
    classifier: ClassifierSpec
    tag: str = "RFE"

    def select(self, d: Dataset, seed: int, inner_folds: int) -> Selection:
        idx = rfe_select(d, self.target_count, self.classifier, seed)
        return Selection(indices=tuple(int(i) for i in idx))


@dataclass(frozen=True)
class GaSelector:
    ga: GaConfig
    alpha: float
    variance_penalty: bool
    classifier: ClassifierSpec
    verbose: bool = False           # one stderr line per generation
    tag: str = "GA"

    def select(self, d: Dataset, seed: int, inner_folds: int) -> Selection:
        fit = FitnessConfig(
            classifier=self.classifier.with_seed(derive_seed(seed, 1)),
            alpha=self.alpha,
            variance_penalty=self.variance_penalty,
            inner_folds=inner_folds,
            fold_seed=derive_seed(seed, 2),
        )
        ga = GaConfig(**{**self.ga.to_dict(), "seed": derive_seed(seed, 3)})
        progress = _stderr_progress(self.classifier.kind.value, self.alpha) \
            if self.verbose else None
        bits, report, log = evolve(ga, d.n_features, FitnessEvaluator(d, fit),
                                   progress=progress)
        return Selection(
            indices=tuple(int(i) for i in np.flatnonzero(bits)),
            inner_fold_accuracies=report.fold_accuracies,
            log=log,
        )


def _stderr_progress(kind: str, alpha: float):
    import sys

    def cb(gen, row):
        print(f"[GA {kind} a={alpha}] gen {gen} best={row['best_fitness']:.4f} "
              f"mean={row['mean_fitness']:.4f} noF={row['best_num_features']}",
              file=sys.stderr)
    return cb


# --------------------------------------------------------------------------
# Grid search (Table-style exhaustive sweep of classifier parameters)
# --------------------------------------------------------------------------

def default_grids(kind: Kind | str, n_features: int) -> dict:
    """Published parameter grids for each classifier kind."""
    kind = Kind(kind)
    if kind is Kind.KNN:
        return {"k_neighbors": [1, 3, 5, 7, 9]}
    if kind is Kind.DTC:
        return {
            "max_depth": list(range(1, 11)) + [None],
            "min_samples_split": list(range(2, 11)),
            "min_samples_leaf": list(range(1, 11)),
            "max_features": list(range(1, n_features + 1)),
        }
    sqrt_f = max(1, int(np.floor(np.sqrt(n_features))))
    return {
        "max_depth": list(range(1, 7)) + [None],
        "min_samples_split": list(range(2, 6)),
        "min_samples_leaf": list(range(1, 6)),
        "max_features": list(range(1, sqrt_f + 1)),
        "n_estimators": [100, 200],
    }


def grid_search(d: Dataset, kind: Kind | str, grids: dict, folds: int = 10,
                seed: int = 0) -> ClassifierSpec:
    """Pick the grid point with the best stratified-CV mean accuracy.

    Enumeration order follows the grid dict; ties keep the earliest
    candidate.  Combinations with min_samples_leaf > min_samples_split are
    skipped as invalid.
    """
    kind = Kind(kind)
    if not grids or any(len(v) == 0 for v in grids.values()):
        raise ValueError("grids must be non-empty")
    plan = make_folds(d, folds, seed=seed, stratified=True)
    names = list(grids)
    best_spec, best_score = None, -1.0
    for values in itertools.product(*(grids[n] for n in names)):
        params = dict(zip(names, values))
        if params.get("min_samples_leaf", 1) > params.get("min_samples_split", 2):
            continue
        # 0 means "unlimited" for grids coming from config files, where
        # null is not expressible
        for unlimited in ("max_depth", "max_features"):
            if params.get(unlimited) == 0:
                params[unlimited] = None
        spec = ClassifierSpec(kind=kind, seed=seed, **params)
        score = _cv_mean_accuracy(d, spec, plan)
        if score > best_score + 1e-12:
            best_spec, best_score = spec, score
    if best_spec is None:
        raise ValueError("grid contained no valid parameter combination")
    return best_spec


def _cv_mean_accuracy(d: Dataset, spec: ClassifierSpec, plan: FoldPlan) -> float:
    return float(np.mean(_cv_fold_accuracies(d, spec, plan)))


def _cv_fold_accuracies(d: Dataset, spec: ClassifierSpec, plan: FoldPlan) -> list[float]:
    out = []
    for train_idx, test_idx in plan.iter_folds():
        model = train(spec, d.features[train_idx], d.labels[train_idx])
        out.append(accuracy(model.predict(d.features[test_idx]), d.labels[test_idx]))
    return out


# --------------------------------------------------------------------------
# RFE
# --------------------------------------------------------------------------

def rfe_select(d: Dataset, target_count: int, classifier: ClassifierSpec,
               seed: int = 0) -> np.ndarray:
    """Drop the least important feature per round until ``target_count`` remain.

    Importance is mean impurity decrease, so only tree-based kinds qualify.
    Importance ties drop the highest remaining feature index.
    """
    if classifier.kind is Kind.KNN:
        raise ValueError("RFE needs impurity importances; KNN has none")
    if not 1 <= target_count <= d.n_features:
        raise ValueError(f"target_count must be in [1, {d.n_features}]")
    remaining = np.arange(d.n_features)
    round_no = 0
    while len(remaining) > target_count:
        spec = classifier.with_seed(derive_seed(seed, round_no))
        model = train(spec, d.features[:, remaining], d.labels)
        imp = model.feature_importances
        worst = np.flatnonzero(imp == imp.min()).max()
        remaining = np.delete(remaining, worst)
        round_no += 1
    return remaining


def ga_select(d: Dataset, ga: GaConfig, fit: FitnessConfig):
    """One GA run over the whole dataset; returns (feature indices, log)."""
    bits, _, log = evolve(ga, d.n_features, FitnessEvaluator(d, fit))
    return np.flatnonzero(bits), log


# --------------------------------------------------------------------------
# Nested cross-validation
# --------------------------------------------------------------------------

def _nested_task(args):
    """One (repetition, fold) unit; module-level so it pickles for workers."""
    d, selector, spec, classifier, grids, rep, fold = args
    task_seed = derive_seed(spec.seed, rep, fold)
    plan = make_folds(d, spec.outer_folds, seed=derive_seed(spec.seed, rep),
                      stratified=False)
    train_idx = plan.train_indices(fold)
    test_idx = plan.test_indices(fold)
    assert not np.intersect1d(train_idx, test_idx).size, "outer fold leakage"

    train_d = d.subset(train_idx)
    sel = selector.select(train_d, task_seed, spec.inner_folds)
    assert len(sel.indices) > 0, "selector returned an empty subset"

    cls = classifier.with_seed(derive_seed(task_seed, 4))
    cols = np.asarray(sel.indices, dtype=np.intp)
    if grids is not None:
        # tuning stays inside the outer-training partition
        cls = grid_search(train_d.restrict(cols), classifier.kind, grids,
                          folds=spec.inner_folds, seed=derive_seed(task_seed, 6))
    model = train(cls, train_d.features[:, cols], train_d.labels)
    pred = model.predict(d.features[np.ix_(test_idx, cols)])
    correct = int(np.sum(pred == d.labels[test_idx]))

    if sel.inner_fold_accuracies is not None:
        inner = list(sel.inner_fold_accuracies)
    else:
        inner_plan = make_folds(train_d, spec.inner_folds,
                                seed=derive_seed(task_seed, 5), stratified=True)
        inner = _cv_fold_accuracies(train_d.restrict(cols), cls, inner_plan)
    return {
        "repetition": rep,
        "fold": fold,
        "correct": correct,
        "n_test": int(len(test_idx)),
        "inner_mean_accuracy": float(np.mean(inner)),
        "num_selected": len(sel.indices),
        "log": sel.log,
    }


def nested_validate(d: Dataset, selector, spec: NestedCvSpec,
                    classifier: ClassifierSpec, workers: int = 1,
                    grids: dict | None = None,
                    log_dir=None, log_prefix: str = "", progress=None) -> dict:
    """Validate a selection procedure without leaking outer-test instances.

    Returns one report row: inner-CV test statistics across all
    (repetition, fold) tasks, pooled validation accuracy per repetition
    averaged over repetitions, and a descriptive feature subset from one
    selector run on the full dataset.
    """
    tasks = [
        (d, selector, spec, classifier, grids, rep, fold)
        for rep in range(spec.repetitions)
        for fold in range(spec.outer_folds)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_nested_task, tasks, chunksize=4))
    else:
        results = [_nested_task(t) for t in tasks]

    per_rep = []
    for rep in range(spec.repetitions):
        rows = [r for r in results if r["repetition"] == rep]
        assert sum(r["n_test"] for r in rows) == d.n_instances, "outer coverage broken"
        per_rep.append(sum(r["correct"] for r in rows) / d.n_instances)
    inner_means = [r["inner_mean_accuracy"] for r in results]

    full_sel = selector.select(d, derive_seed(spec.seed, 0xFEED), spec.inner_folds)
    if log_dir is not None:
        for r in results:
            if r["log"] is not None:
                r["log"].to_csv(
                    f"{log_dir}/evolution_{log_prefix}r{r['repetition']}_f{r['fold']}.csv")
        if full_sel.log is not None:
            full_sel.log.to_csv(f"{log_dir}/evolution_{log_prefix}full.csv")
    if progress is not None:
        progress(selector.tag, classifier.kind.value, float(np.mean(per_rep)))

    return {
        "classifier": classifier.kind.value,
        "classifier_spec": classifier.to_dict(),
        "selector": selector.tag,
        "alpha": getattr(selector, "alpha", None),
        "variance_penalty": getattr(selector, "variance_penalty", None),
        "num_features": len(full_sel.indices),
        "selected_features": [d.feature_names[i] for i in full_sel.indices],
        "min_test_accuracy": float(np.min(inner_means)),
        "avg_test_accuracy": float(np.mean(inner_means)),
        "std_test_accuracy": float(np.std(inner_means)),
        "max_test_accuracy": float(np.max(inner_means)),
        "validation_accuracy": float(np.mean(per_rep)),
        "per_repetition_validation": [float(v) for v in per_rep],
        "inner_mean_accuracies": [float(v) for v in inner_means],
        "per_fold_num_selected": [r["num_selected"] for r in results],
        "nested_spec": spec.to_dict(),
    }


# --------------------------------------------------------------------------
# Sweep and report assembly
# --------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    CSV_COLUMNS = ("classifier", "selector", "alpha", "variance_penalty",
                   "num_features", "min_test_accuracy", "avg_test_accuracy",
                   "std_test_accuracy", "max_test_accuracy", "validation_accuracy")

    def add(self, row: dict) -> None:
        a, v = row.get("min_test_accuracy"), row.get("validation_accuracy")
        if a is not None:
            assert (row["min_test_accuracy"] <= row["avg_test_accuracy"]
                    <= row["max_test_accuracy"]), "report row ordering broken"
        self.rows.append(row)

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump({"metadata": self.metadata, "rows": self.rows}, fh,
                      indent=2, sort_keys=True)
            fh.write("\n")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=self.CSV_COLUMNS, extrasaction="ignore")
            w.writeheader()
            for row in self.rows:
                w.writerow(row)


def sweep(d: Dataset, classifiers: list[ClassifierSpec], alphas: list[float],
          variance_flags: list[bool], ga: GaConfig, nested: NestedCvSpec,
          workers: int = 1, log_dir=None, progress=None,
          verbose: bool = False) -> ExperimentReport:
    """GA-selection sweep over classifier x alpha x variance-penalty.

    Adds a majority-baseline row so every configuration is read against the
    floor a useful model must beat.
    """
    if not classifiers or not alphas or not variance_flags:
        raise ValueError("classifiers, alphas and variance_flags must be non-empty")
    report = ExperimentReport(metadata={
        "ga": ga.to_dict(),
        "nested": nested.to_dict(),
        "n_instances": d.n_instances,
        "n_features": d.n_features,
        "class_names": list(d.class_names),
    })
    report.add({
        "classifier": "majority",
        "selector": "baseline",
        "alpha": None,
        "variance_penalty": None,
        "num_features": 0,
        "validation_accuracy": majority_baseline(d),
    })
    for cls, alpha, var in itertools.product(classifiers, alphas, variance_flags):
        selector = GaSelector(ga=ga, alpha=alpha, variance_penalty=var,
                              classifier=cls, verbose=verbose)
        prefix = f"{cls.kind.value}_a{alpha}_{'var' if var else 'novar'}_"
        try:
            row = nested_validate(d, selector, nested, cls, workers=workers,
                                  log_dir=log_dir, log_prefix=prefix,
                                  progress=progress)
        except Exception as e:
            raise RuntimeError(
                f"sweep failed for classifier={cls.kind.value} alpha={alpha} "
                f"variance_penalty={var}: {e}") from e
        report.add(row)
    return report
