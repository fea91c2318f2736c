"""Command-line entry point.

Three commands driven by one TOML config file whose section keys mirror the
published parameter tables (p_crossover, p_mutation, init_prob, population,
generations, penalty, var_penalty):

    gafs baseline      --config run.toml [--out DIR]
    gafs reproduce-rfe --config run.toml [--out DIR]
    gafs ga            --config run.toml [--out DIR]

Progress goes to stderr; machine-readable outputs (report.json, report.csv,
evolution_*.csv, foldplan_*.csv, baseline.json) go to the output directory.
Every emitted file embeds the fully resolved config and master seed, so a run
can be reproduced from its own outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import tomli

from .classifiers import ClassifierSpec, Kind, default_spec
from .dataset import DatasetError, load_csv, majority_baseline, make_folds
from .ga import GaConfig
from .harness import (
    ExperimentReport,
    FixedListSelector,
    NestedCvSpec,
    RfeSelector,
    default_grids,
    derive_seed,
    nested_validate,
    sweep,
)

GA_DEFAULTS = {
    "p_crossover": 0.75,
    "p_mutation": 0.15,
    "per_gene_flip": 0.05,
    "init_prob": 0.01,
    "population": 50,
    "generations": 300,
    "elitism": 0,
}
FITNESS_DEFAULTS = {"penalty": [0.3, 0.5, 0.7], "var_penalty": [False, True],
                    "inner_folds": 10}
NESTED_DEFAULTS = {"outer_folds": 100, "inner_folds": 10, "repetitions": 10}


class ConfigError(ValueError):
    pass


def _load_config(path) -> dict:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            return tomli.load(fh)
        except tomli.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e


def resolve_config(raw: dict, seed: int | None) -> dict:
    """Fill defaults and normalize; the result is echoed into every output."""
    dataset = raw.get("dataset", {})
    if "path" not in dataset:
        raise ConfigError("config needs [dataset] path = \"...\"")
    fitness = {**FITNESS_DEFAULTS, **raw.get("fitness", {})}
    resolved = {
        "seed": seed if seed is not None else int(raw.get("seed", 0)),
        "dataset": {"path": dataset["path"],
                    "label_column": dataset.get("label_column")},
        "ga": {**GA_DEFAULTS, **raw.get("ga", {})},
        "fitness": fitness,
        "nested": {**NESTED_DEFAULTS, **raw.get("nested", {})},
        "classifiers": raw.get("classifiers", {}).get(
            "kinds", ["KNN", "DTC", "RFC", "ETC"]),
        "rfe": raw.get("rfe", {}),
        "grid": raw.get("grid", {}),
    }
    for kind in resolved["classifiers"]:
        if kind not in Kind.__members__:
            raise ConfigError(f"unknown classifier kind {kind!r} "
                              f"(supported: {', '.join(Kind.__members__)})")
    for a in resolved["fitness"]["penalty"]:
        if not 0.0 <= float(a) <= 1.0:
            raise ConfigError(f"penalty weight {a} outside [0, 1]")
    return resolved


def _build_parts(cfg: dict):
    d = load_csv(cfg["dataset"]["path"], cfg["dataset"]["label_column"])
    seed = cfg["seed"]
    ga_params = {k: v for k, v in cfg["ga"].items() if k != "seed"}
    ga = GaConfig(**ga_params, seed=derive_seed(seed, 10))
    nested = NestedCvSpec(
        outer_folds=min(cfg["nested"]["outer_folds"], d.n_instances),
        inner_folds=cfg["nested"]["inner_folds"],
        repetitions=cfg["nested"]["repetitions"],
        seed=derive_seed(seed, 11),
    )
    return d, ga, nested


def _export_foldplans(d, nested, out):
    for rep in range(nested.repetitions):
        plan = make_folds(d, nested.outer_folds,
                          seed=derive_seed(nested.seed, rep), stratified=False)
        plan.to_csv(os.path.join(out, f"foldplan_outer_r{rep}.csv"))


def cmd_baseline(cfg: dict, out: str | None, workers: int) -> int:
    d = load_csv(cfg["dataset"]["path"], cfg["dataset"]["label_column"])
    counts = d.class_counts()
    baseline = majority_baseline(d)
    print(f"instances: {d.n_instances}")
    print(f"features: {d.n_features}")
    print(f"class counts: {d.class_names[0]}={counts[0]} {d.class_names[1]}={counts[1]}")
    print(f"majority baseline: {baseline:.9f}")
    if out:
        with open(os.path.join(out, "baseline.json"), "w") as fh:
            json.dump({
                "config": cfg,
                "n_instances": d.n_instances,
                "n_features": d.n_features,
                "class_names": list(d.class_names),
                "class_counts": list(counts),
                "majority_baseline": baseline,
            }, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_reproduce_rfe(cfg: dict, out: str | None, workers: int) -> int:
    d, ga, nested = _build_parts(cfg)
    rfe = cfg["rfe"]
    if "features" in rfe:
        selector = FixedListSelector(feature_names=tuple(rfe["features"]))
    elif "target_count" in rfe:
        base = default_spec(rfe.get("classifier", "DTC"), d.n_features)
        selector = RfeSelector(target_count=int(rfe["target_count"]),
                               classifier=base)
    else:
        raise ConfigError("[rfe] needs either features = [...] or target_count = N")

    use_grid = cfg["grid"].get("enabled", True)
    report = ExperimentReport(metadata={"config": cfg, "command": "reproduce-rfe"})
    for kind in cfg["classifiers"]:
        n_sel = len(getattr(selector, "feature_names", ())) or \
            getattr(selector, "target_count", d.n_features)
        grids = default_grids(kind, n_sel) if use_grid else None
        grids = cfg["grid"].get(kind.lower(), grids)
        print(f"validating {selector.tag} selection with {kind}...", file=sys.stderr)
        row = nested_validate(d, selector, nested, default_spec(kind, d.n_features),
                              workers=workers, grids=grids)
        report.add(row)
    if out:
        report.to_json(os.path.join(out, "report.json"))
        report.to_csv(os.path.join(out, "report.csv"))
        _export_foldplans(d, nested, out)
    return 0


def cmd_ga(cfg: dict, out: str | None, workers: int) -> int:
    d, ga, nested = _build_parts(cfg)
    classifiers = [default_spec(k, d.n_features) for k in cfg["classifiers"]]
    report = sweep(
        d,
        classifiers=classifiers,
        alphas=[float(a) for a in cfg["fitness"]["penalty"]],
        variance_flags=[bool(v) for v in cfg["fitness"]["var_penalty"]],
        ga=ga,
        nested=nested,
        workers=workers,
        log_dir=out,
        verbose=workers == 1,
        progress=lambda tag, kind, val: print(
            f"done {tag} {kind}: validation={val:.4f}", file=sys.stderr),
    )
    report.metadata["config"] = cfg
    report.metadata["command"] = "ga"
    if out:
        report.to_json(os.path.join(out, "report.json"))
        report.to_csv(os.path.join(out, "report.csv"))
        _export_foldplans(d, nested, out)
    return 0


COMMANDS = {
    "baseline": cmd_baseline,
    "reproduce-rfe": cmd_reproduce_rfe,
    "ga": cmd_ga,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gafs",
        description="GA wrapper feature selection with nested cross-validation")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (overrides config)")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel workers (default: CPU count); never "
                             "affects results")
    parser.add_argument("--dry-run", action="store_true",
                        help="validate config, print resolved values, exit")
    args = parser.parse_args(argv)

    try:
        cfg = resolve_config(_load_config(args.config), args.seed)
    except ConfigError as e:
        print(f"error:config: {e}", file=sys.stderr)
        return 2

    if args.dry_run:
        print(json.dumps(cfg, indent=2, sort_keys=True))
        return 0

    workers = args.workers if args.workers else (os.cpu_count() or 1)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    try:
        return COMMANDS[args.command](cfg, args.out, workers)
    except ConfigError as e:
        print(f"error:config: {e}", file=sys.stderr)
        return 2
    except DatasetError as e:
        print(f"error:dataset: {e}", file=sys.stderr)
        return 3
    except Exception as e:
        print(f"error:runtime: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
