"""Genetic-algorithm wrapper feature selection with honest nested validation."""

from .classifiers import ClassifierSpec, Kind, TrainedModel, accuracy, default_spec, predict, train
from .dataset import Dataset, DatasetError, FoldPlan, load_csv, majority_baseline, make_folds
from .fitness import FitnessConfig, FitnessEvaluator, FitnessReport, evaluate, fitness_eq1, fitness_eq2
from .ga import EvolutionLog, GaConfig, crossover_two_point, evolve, init_population, mutate_bit_flip, tournament_select
from .harness import (
    ExperimentReport,
    FixedListSelector,
    GaSelector,
    NestedCvSpec,
    RfeSelector,
    default_grids,
    ga_select,
    grid_search,
    nested_validate,
    rfe_select,
    sweep,
)

__version__ = "0.1.0"
