"""
NSGA-II with per-generation crossover and mutation rates
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from pareto import crowding_distance, non_dominated_sort
from utils import maybe_stage
from .base import Individual, OperatorSuite, ParamSpace, SearchState, TargetAlgorithm


@dataclass(frozen=True)
class Nsga2Params:
    crossover_rate: float
    mutation_rate: float

    def __post_init__(self):
        for name in ("crossover_rate", "mutation_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability, got {value}")


def rank_and_crowding(objectives: np.ndarray) -> Tuple[List[List[int]], np.ndarray, np.ndarray]:
    """Front partition, per-member rank and per-member crowding distance"""
    partition = non_dominated_sort(objectives)
    crowd = np.zeros(len(objectives), dtype=np.float64)
    for front in partition.fronts:
        crowd[front] = crowding_distance(objectives[front])
    return partition.fronts, partition.rank, crowd


def binary_tournament(rank: np.ndarray, crowd: np.ndarray, rng: np.random.Generator) -> int:
    """Lower rank wins, then larger crowding distance, then the first draw"""
    i, j = (int(k) for k in rng.integers(len(rank), size=2))
    if rank[j] < rank[i] or (rank[j] == rank[i] and crowd[j] > crowd[i]):
        return j
    return i


def select_survivors(objectives: np.ndarray, size: int) -> List[int]:
    """
    Elitist truncation: whole fronts in rank order, the last partial front
    filled by descending crowding distance
    """
    fronts, _, crowd = rank_and_crowding(objectives)
    chosen: List[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            continue
        order = sorted(front, key=lambda i: -crowd[i])
        chosen.extend(order[: size - len(chosen)])
        break
    return chosen


def nsga2_generation(
    state: SearchState,
    params: Nsga2Params,
    operators: OperatorSuite,
    rng: np.random.Generator,
) -> Tuple[List[Individual], List[Individual]]:
    """
    One NSGA-II generation

    Offspring that duplicate a genome already present are discarded before
    (mu + lambda) truncation, so a generation without variation keeps the
    population unchanged.

    Args:
        state: Current search state (evaluated population)
        params: Crossover and mutation rates for this generation
        operators: Problem-specific operator suite
        rng: Random stream of the episode

    Returns:
        (next population, newly evaluated offspring)
    """
    population = state.population
    size = len(population)
    objectives = np.vstack([ind.objectives for ind in population])
    _, rank, crowd = rank_and_crowding(objectives)

    children = []
    while len(children) < size:
        a = population[binary_tournament(rank, crowd, rng)].genome
        b = population[binary_tournament(rank, crowd, rng)].genome
        if rng.random() < params.crossover_rate:
            c1, c2 = operators.crossover(a, b, rng)
        else:
            c1, c2 = a, b
        children.append(operators.mutate(c1, params.mutation_rate, rng))
        children.append(operators.mutate(c2, params.mutation_rate, rng))
    children = children[:size]

    seen = {operators.key(ind.genome) for ind in population}
    offspring = []
    for genome in children:
        key = operators.key(genome)
        if key in seen:
            continue
        seen.add(key)
        offspring.append(Individual(genome, operators.evaluate(genome)))

    combined = list(population) + offspring
    survivors = select_survivors(np.vstack([ind.objectives for ind in combined]), size)
    return [combined[i] for i in survivors], offspring


class Nsga2(TargetAlgorithm):
    """NSGA-II driven by an operator suite; tunes crossover and mutation rates"""

    name = "nsga2"
    param_space = ParamSpace(names=("crossover_rate", "mutation_rate"), low=(0.6, 0.0), high=(1.0, 0.1))
    static_values = (0.7, 0.02)

    def __init__(self, operators: OperatorSuite, population_size: int = 50):
        super().__init__(population_size)
        self.operators = operators

    @property
    def num_objectives(self) -> int:
        return self.operators.num_objectives

    def initial_population(self, rng: np.random.Generator) -> List[Individual]:
        genomes = self.operators.initial_genomes(self.population_size, rng)
        return [Individual(g, self.operators.evaluate(g)) for g in genomes]

    def make_params(self, values: Sequence[float]) -> Nsga2Params:
        crossover_rate, mutation_rate = (float(v) for v in values)
        return Nsga2Params(crossover_rate=crossover_rate, mutation_rate=mutation_rate)

    def step(self, state: SearchState, params: Nsga2Params, rng: np.random.Generator) -> SearchState:
        with maybe_stage(self.timer, "ea_generation"):
            population, offspring = nsga2_generation(state, params, self.operators, rng)
        return self.advance(state, population, offspring)
