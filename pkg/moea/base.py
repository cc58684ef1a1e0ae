"""
Shared search-state types and the target-algorithm interface
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Generic, Hashable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from pareto import hypervolume, non_dominated_mask
from utils import StageTimer, maybe_stage

G = TypeVar("G")


@dataclass
class Individual(Generic[G]):
    """An encoding together with its evaluated objective vector"""

    genome: G
    objectives: np.ndarray


@dataclass
class SearchState:
    """
    Everything one episode's search carries from generation to generation

    hv_* values are measured on the current population against the nadir fixed
    at generation 0; hv_best is their running maximum.
    """

    population: List[Individual]
    archive: List[Individual]
    generation: int
    nadir: np.ndarray
    hv_initial: float
    hv_best: float
    hv_current: float
    evaluations: int = 0
    history: List[float] = field(default_factory=list)

    def objective_matrix(self) -> np.ndarray:
        return np.vstack([ind.objectives for ind in self.population])

    def archive_matrix(self) -> np.ndarray:
        return np.vstack([ind.objectives for ind in self.archive])

    def front_matrix(self) -> np.ndarray:
        """Objective vectors of the population's first front"""
        objectives = self.objective_matrix()
        return objectives[non_dominated_mask(objectives)]


def update_archive(archive: Sequence[Individual], candidates: Sequence[Individual]) -> List[Individual]:
    """
    Merge candidates into a non-dominated archive

    Identical objective vectors keep their earliest holder, so existing
    members win ties against newcomers.
    """
    merged: List[Individual] = []
    seen = set()
    for ind in list(archive) + list(candidates):
        key = ind.objectives.tobytes()
        if key not in seen:
            seen.add(key)
            merged.append(ind)
    if not merged:
        return merged
    mask = non_dominated_mask(np.vstack([ind.objectives for ind in merged]))
    return [ind for ind, keep in zip(merged, mask) if keep]


@dataclass(frozen=True)
class ParamSpace:
    """Named box of tunable parameters"""

    names: Tuple[str, ...]
    low: Tuple[float, ...]
    high: Tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.names)


class OperatorSuite(ABC, Generic[G]):
    """Problem-specific encoding, variation and evaluation for a genetic algorithm"""

    def __init__(self, num_objectives: int, objective_scale: float = 1.0):
        """
        Args:
            num_objectives: Length of every objective vector this suite returns
            objective_scale: Positive factor applied to every objective value (unit conversion)
        """
        if objective_scale <= 0.0:
            raise ValueError("objective_scale must be positive")
        self.num_objectives = num_objectives
        self.objective_scale = objective_scale
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def initial_genomes(self, size: int, rng: np.random.Generator) -> List[G]:
        """Initial population encodings"""
        pass

    @abstractmethod
    def crossover(self, a: G, b: G, rng: np.random.Generator) -> Tuple[G, G]:
        pass

    @abstractmethod
    def mutate(self, genome: G, rate: float, rng: np.random.Generator) -> G:
        pass

    @abstractmethod
    def raw_objectives(self, genome: G) -> np.ndarray:
        """Unscaled objective vector of a genome"""
        pass

    @abstractmethod
    def key(self, genome: G) -> Hashable:
        """Identity used to drop duplicate offspring"""
        pass

    def evaluate(self, genome: G) -> np.ndarray:
        values = self.raw_objectives(genome)
        if self.objective_scale != 1.0:
            values = values * self.objective_scale
        return values


class TargetAlgorithm(ABC):
    """
    Abstract base class for configurable multi-objective searches

    One generation equals one environment step; the policy picks the
    generation's parameters inside param_space.
    """

    name: str = ""
    param_space: ParamSpace
    static_values: Tuple[float, ...]

    def __init__(self, population_size: int):
        if population_size < 1:
            raise ValueError("population_size must be at least 1")
        self.population_size = population_size
        self.timer: Optional[StageTimer] = None
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def num_objectives(self) -> int:
        pass

    @abstractmethod
    def initial_population(self, rng: np.random.Generator) -> List[Individual]:
        pass

    @abstractmethod
    def make_params(self, values: Sequence[float]) -> Any:
        """Typed generation parameters from raw values in param_space order"""
        pass

    @abstractmethod
    def step(self, state: SearchState, params: Any, rng: np.random.Generator) -> SearchState:
        """Run one generation and return the successor state"""
        pass

    def static_params(self) -> Any:
        """Rule-of-thumb parameters used by the static baseline"""
        return self.make_params(self.static_values)

    def initialize(self, rng: np.random.Generator) -> SearchState:
        """
        Build and evaluate generation 0

        The nadir is the per-objective worst of this population and stays fixed
        for the rest of the episode.
        """
        population = self.initial_population(rng)
        objectives = np.vstack([ind.objectives for ind in population])
        nadir = objectives.max(axis=0)
        hv = hypervolume(objectives, nadir)
        return SearchState(
            population=population,
            archive=update_archive([], population),
            generation=0,
            nadir=nadir,
            hv_initial=hv,
            hv_best=hv,
            hv_current=hv,
            evaluations=len(population),
            history=[hv],
        )

    def advance(self, state: SearchState, population: List[Individual], evaluated: Sequence[Individual]) -> SearchState:
        """Successor state after a generation produced population from the newly evaluated individuals"""
        with maybe_stage(self.timer, "hypervolume"):
            hv = hypervolume(np.vstack([ind.objectives for ind in population]), state.nadir)
        best = max(state.hv_best, hv)
        return replace(
            state,
            population=population,
            archive=update_archive(state.archive, evaluated),
            generation=state.generation + 1,
            hv_current=hv,
            hv_best=best,
            evaluations=state.evaluations + len(evaluated),
            history=state.history + [best],
        )
