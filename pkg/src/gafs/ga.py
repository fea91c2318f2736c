"""Binary-genotype evolution engine.

Likelihood-based initialization, two-point crossover, bit-flip mutation,
binary tournament selection and a generational loop with a hall of fame.
All randomness flows through one master generator so runs are reproducible
from the config seed alone.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

Genotype = np.ndarray  # 1-d bool array, one bit per feature


@dataclass(frozen=True)
class GaConfig:
    p_crossover: float = 0.75
    p_mutation: float = 0.15        # per-individual chance that mutation runs
    per_gene_flip: float = 0.05     # flip probability inside a mutation event
    init_prob: float = 0.01
    population: int = 50
    generations: int = 300
    elitism: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("p_crossover", "p_mutation", "per_gene_flip", "init_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.population < 1 or self.generations < 0:
            raise ValueError("population must be >= 1 and generations >= 0")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be in [0, population)")

    def to_dict(self) -> dict:
        return {
            "p_crossover": self.p_crossover,
            "p_mutation": self.p_mutation,
            "per_gene_flip": self.per_gene_flip,
            "init_prob": self.init_prob,
            "population": self.population,
            "generations": self.generations,
            "elitism": self.elitism,
            "seed": self.seed,
        }


@dataclass
class EvolutionLog:
    """One row per generation; generation 0 is the initial population."""

    rows: list = field(default_factory=list)

    COLUMNS = ("generation", "best_fitness", "mean_fitness", "best_accuracy",
               "best_num_features")

    def append(self, generation, best_fitness, mean_fitness, best_accuracy,
               best_num_features):
        self.rows.append({
            "generation": int(generation),
            "best_fitness": float(best_fitness),
            "mean_fitness": float(mean_fitness),
            "best_accuracy": float(best_accuracy),
            "best_num_features": int(best_num_features),
        })

    def best_fitness_trace(self) -> list[float]:
        return [r["best_fitness"] for r in self.rows]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=self.COLUMNS)
            w.writeheader()
            w.writerows(self.rows)


def _repair(bits: Genotype, rng: np.random.Generator) -> Genotype:
    """An all-zero genotype gets one uniformly random bit set."""
    if not bits.any():
        bits[rng.integers(len(bits))] = True
    return bits


def init_population(cfg: GaConfig, n_features: int,
                    rng: np.random.Generator | None = None) -> list[Genotype]:
    """Each bit set independently with probability ``cfg.init_prob``."""
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    return [
        _repair(rng.random(n_features) < cfg.init_prob, rng)
        for _ in range(cfg.population)
    ]


def crossover_two_point(a: Genotype, b: Genotype,
                        rng: np.random.Generator) -> tuple[Genotype, Genotype]:
    """Swap the segment between two uniform cut positions.

    Cuts are drawn from 0..n inclusive and ordered; the exchanged segment is
    the half-open range between them, so equal cuts leave both parents intact.
    """
    if len(a) != len(b):
        raise ValueError("parents must have equal length")
    if len(a) < 2:
        raise ValueError("genotypes must have length >= 2")
    lo, hi = np.sort(rng.integers(0, len(a) + 1, size=2))
    c1, c2 = a.copy(), b.copy()
    c1[lo:hi], c2[lo:hi] = b[lo:hi], a[lo:hi]
    return c1, c2


def mutate_bit_flip(g: Genotype, per_gene_flip: float,
                    rng: np.random.Generator) -> Genotype:
    """Flip each bit independently with probability ``per_gene_flip``."""
    mask = rng.random(len(g)) < per_gene_flip
    return _repair(g ^ mask, rng)


def tournament_select(population: list[Genotype], fitness: list[float],
                      count: int, rng: np.random.Generator) -> list[Genotype]:
    """``count`` binary-tournament winners, drawn with replacement.

    Equal fitness resolves by a fair coin so neither draw slot is favoured.
    """
    if len(population) == 0:
        raise ValueError("population is empty")
    if len(fitness) != len(population):
        raise ValueError("fitness must align with population")
    winners = []
    for _ in range(count):
        i, j = rng.integers(0, len(population), size=2)
        if fitness[i] > fitness[j]:
            pick = i
        elif fitness[j] > fitness[i]:
            pick = j
        else:
            pick = i if rng.random() < 0.5 else j
        winners.append(population[pick].copy())
    return winners


def evolve(cfg: GaConfig, n_features: int, evaluator,
           progress=None) -> tuple[Genotype, object, EvolutionLog]:
    """Run the generational loop and return the best genotype ever seen.

    ``evaluator`` maps a genotype to a report object exposing ``fitness``
    and, for logging, ``effectiveness`` and ``num_selected``.  Offspring
    replace the population wholesale unless ``cfg.elitism`` carries the top
    individuals over; a hall of fame retains the best-ever individual
    regardless.
    """
    rng = np.random.default_rng(cfg.seed)
    population = init_population(cfg, n_features, rng)
    log = EvolutionLog()
    hof_bits, hof_report = None, None

    for gen in range(cfg.generations + 1):
        reports = [_evaluate(evaluator, g, gen, i)
                   for i, g in enumerate(population)]
        fitnesses = [r.fitness for r in reports]
        best_i = int(np.argmax(fitnesses))
        if hof_report is None or fitnesses[best_i] > hof_report.fitness:
            hof_bits = population[best_i].copy()
            hof_report = reports[best_i]
        log.append(gen, hof_report.fitness, float(np.mean(fitnesses)),
                   getattr(hof_report, "effectiveness", float("nan")),
                   int(hof_bits.sum()))
        if progress is not None:
            progress(gen, log.rows[-1])
        if gen == cfg.generations:
            break

        elites = []
        if cfg.elitism:
            order = np.argsort(fitnesses, kind="stable")[::-1]
            elites = [population[int(k)].copy() for k in order[: cfg.elitism]]

        parents = tournament_select(population, fitnesses, cfg.population, rng)
        offspring = []
        for a, b in zip(parents[0::2], parents[1::2]):
            if rng.random() < cfg.p_crossover:
                a, b = crossover_two_point(a, b, rng)
            offspring.extend((a, b))
        if len(parents) % 2:
            offspring.append(parents[-1])
        # repair covers crossover-only children too: an all-zero subset is
        # never submitted for evaluation
        offspring = [
            mutate_bit_flip(child, cfg.per_gene_flip, rng)
            if rng.random() < cfg.p_mutation else _repair(child, rng)
            for child in offspring
        ]
        population = elites + offspring[: cfg.population - cfg.elitism]

    return hof_bits, hof_report, log


def _evaluate(evaluator, genotype, gen, idx):
    try:
        return evaluator(genotype)
    except Exception as e:
        raise RuntimeError(
            f"fitness evaluation failed at generation {gen}, individual {idx}: {e}"
        ) from e
