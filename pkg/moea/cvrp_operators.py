"""
Permutation encoding for CVRP: ordered crossover, shuffle mutation and the shared key decoder
"""

from dataclasses import dataclass
from typing import Hashable, List, Sequence, Tuple

import numpy as np

from errors import InfeasibleSolutionError
from problems import CvrpInstance, evaluate_cvrp, split_routes
from .base import OperatorSuite


@dataclass(eq=False)
class CvrpGenome:
    """Giant tour: every customer index exactly once"""

    tour: np.ndarray

    def copy(self) -> "CvrpGenome":
        return CvrpGenome(self.tour.copy())

    def key(self) -> bytes:
        return self.tour.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CvrpGenome):
            return NotImplemented
        return np.array_equal(self.tour, other.tour)


def validate_tour(tour: np.ndarray, num_customers: int) -> None:
    if tour.shape != (num_customers,) or not np.array_equal(np.sort(tour), np.arange(num_customers)):
        raise InfeasibleSolutionError("partition", "tour is not a permutation of the customers")


def ordered_crossover(keep_from: np.ndarray, fill_from: np.ndarray, start: int, end: int) -> np.ndarray:
    """
    OX for one child: keep_from[start:end] stays in place, the other positions
    take the remaining customers in fill_from's order
    """
    child = keep_from.copy()
    segment = keep_from[start:end]
    outside = np.ones(len(child), dtype=bool)
    outside[start:end] = False
    child[outside] = fill_from[~np.isin(fill_from, segment)]
    return child


def crossover_cvrp(a: CvrpGenome, b: CvrpGenome, rng: np.random.Generator) -> Tuple[CvrpGenome, CvrpGenome]:
    n = len(a.tour)
    start, end = sorted(rng.choice(n + 1, size=2, replace=False))
    return (
        CvrpGenome(ordered_crossover(a.tour, b.tour, start, end)),
        CvrpGenome(ordered_crossover(b.tour, a.tour, start, end)),
    )


def shuffle_mutation(genome: CvrpGenome, rate: float, rng: np.random.Generator) -> CvrpGenome:
    """Swap each position with a random other position with probability rate"""
    n = len(genome.tour)
    if rate <= 0.0 or n < 2:
        return genome
    hits = np.flatnonzero(rng.random(n) < rate)
    if hits.size == 0:
        return genome
    tour = genome.tour.copy()
    for i in hits:
        j = int(rng.integers(n - 1))
        if j >= i:
            j += 1
        tour[i], tour[j] = tour[j], tour[i]
    return CvrpGenome(tour)


def decode_cvrp_keys(position: np.ndarray, instance: CvrpInstance) -> List[List[int]]:
    """
    Routes from a random-key vector

    Customers are visited by ascending key (ties by customer index), then split
    sequentially by capacity.
    """
    if len(position) != instance.num_customers:
        raise ValueError(f"position has {len(position)} keys for {instance.num_customers} customers")
    return split_routes(instance, np.argsort(position, kind="stable"))


class CvrpSuite(OperatorSuite[CvrpGenome]):
    """NSGA-II operator suite for CVRP"""

    def __init__(self, instance: CvrpInstance, objective_scale: float = 1.0):
        super().__init__(2, objective_scale)
        self.instance = instance

    def initial_genomes(self, size: int, rng: np.random.Generator) -> List[CvrpGenome]:
        return [CvrpGenome(rng.permutation(self.instance.num_customers)) for _ in range(size)]

    def crossover(self, a: CvrpGenome, b: CvrpGenome, rng: np.random.Generator) -> Tuple[CvrpGenome, CvrpGenome]:
        return crossover_cvrp(a, b, rng)

    def mutate(self, genome: CvrpGenome, rate: float, rng: np.random.Generator) -> CvrpGenome:
        return shuffle_mutation(genome, rate, rng)

    def routes(self, genome: CvrpGenome) -> List[List[int]]:
        return split_routes(self.instance, genome.tour)

    def raw_objectives(self, genome: CvrpGenome) -> np.ndarray:
        return evaluate_cvrp(self.instance, self.routes(genome), check=False)

    def key(self, genome: CvrpGenome) -> Hashable:
        return genome.key()
