"""
Multi-objective particle swarm over random-key positions for CVRP
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from pareto import crowding_distance, dominates
from problems import CvrpInstance, evaluate_cvrp
from utils import maybe_stage
from .base import Individual, ParamSpace, SearchState, TargetAlgorithm, update_archive
from .cvrp_operators import decode_cvrp_keys

V_MIN = -0.2
V_MAX = 0.2


@dataclass(eq=False)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_objectives: np.ndarray

    def key(self) -> bytes:
        return self.position.tobytes()


@dataclass(frozen=True)
class MopsoParams:
    phi1: float
    phi2: float
    inertia: float

    def __post_init__(self):
        for name in ("phi1", "phi2", "inertia"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")


def thin_archive(archive: List[Individual], limit: Optional[int]) -> List[Individual]:
    """Drop the most crowded members until at most limit remain"""
    if limit is None or len(archive) <= limit:
        return archive
    members = list(archive)
    while len(members) > limit:
        crowd = crowding_distance(np.vstack([ind.objectives for ind in members]))
        members.pop(int(np.argmin(crowd)))
    return members


def mopso_generation(
    state: SearchState,
    params: MopsoParams,
    instance: CvrpInstance,
    rng: np.random.Generator,
    objective_scale: float = 1.0,
    archive_limit: Optional[int] = None,
) -> SearchState:
    """
    Move every particle once, then refresh personal bests and the archive

    Each particle draws its global guide uniformly from the archive. A
    personal best is kept only while it dominates the particle's new point.
    Returns the successor state with generation, population and archive
    updated; hypervolume bookkeeping is left to the caller.
    """
    if not state.archive:
        raise ValueError("MOPSO generation needs a non-empty archive")
    population = []
    for ind in state.population:
        p: Particle = ind.genome
        n = len(p.position)
        u1 = rng.random(n)
        u2 = rng.random(n)
        guide = state.archive[int(rng.integers(len(state.archive)))].genome
        velocity = (
            params.inertia * p.velocity
            + u1 * params.phi1 * (p.best_position - p.position)
            + u2 * params.phi2 * (guide - p.position)
        )
        velocity = np.clip(velocity, V_MIN, V_MAX)
        position = np.clip(p.position + velocity, 0.0, 1.0)
        objectives = evaluate_cvrp(instance, decode_cvrp_keys(position, instance), check=False) * objective_scale
        if dominates(p.best_objectives, objectives):
            best_position, best_objectives = p.best_position, p.best_objectives
        else:
            best_position, best_objectives = position.copy(), objectives
        population.append(Individual(Particle(position, velocity, best_position, best_objectives), objectives))

    snapshots = [Individual(ind.genome.position.copy(), ind.objectives) for ind in population]
    archive = thin_archive(update_archive(state.archive, snapshots), archive_limit)
    return SearchState(
        population=population,
        archive=archive,
        generation=state.generation + 1,
        nadir=state.nadir,
        hv_initial=state.hv_initial,
        hv_best=state.hv_best,
        hv_current=state.hv_current,
        evaluations=state.evaluations + len(population),
        history=list(state.history),
    )


class Mopso(TargetAlgorithm):
    """MOPSO for CVRP; tunes cognitive and social coefficients and the inertia weight"""

    name = "mopso"
    param_space = ParamSpace(names=("phi1", "phi2", "inertia"), low=(1.0, 1.0, 0.6), high=(3.0, 3.0, 0.9))
    static_values = (2.0, 2.0, 0.9)

    def __init__(
        self,
        instance: CvrpInstance,
        population_size: int = 50,
        objective_scale: float = 1.0,
        archive_limit: Optional[int] = None,
    ):
        super().__init__(population_size)
        if objective_scale <= 0.0:
            raise ValueError("objective_scale must be positive")
        self.instance = instance
        self.objective_scale = objective_scale
        self.archive_limit = archive_limit

    @property
    def num_objectives(self) -> int:
        return 2

    def evaluate(self, position: np.ndarray) -> np.ndarray:
        objectives = evaluate_cvrp(self.instance, decode_cvrp_keys(position, self.instance), check=False)
        return objectives * self.objective_scale

    def initial_population(self, rng: np.random.Generator) -> List[Individual]:
        population = []
        n = self.instance.num_customers
        for _ in range(self.population_size):
            position = rng.random(n)
            velocity = rng.uniform(V_MIN, V_MAX, size=n)
            objectives = self.evaluate(position)
            population.append(Individual(Particle(position, velocity, position.copy(), objectives), objectives))
        return population

    def initialize(self, rng: np.random.Generator) -> SearchState:
        state = super().initialize(rng)
        # archive stores bare positions so they can act as global guides
        snapshots = [Individual(ind.genome.position.copy(), ind.objectives) for ind in state.population]
        state.archive = thin_archive(update_archive([], snapshots), self.archive_limit)
        return state

    def make_params(self, values: Sequence[float]) -> MopsoParams:
        phi1, phi2, inertia = (float(v) for v in values)
        return MopsoParams(phi1=phi1, phi2=phi2, inertia=inertia)

    def step(self, state: SearchState, params: MopsoParams, rng: np.random.Generator) -> SearchState:
        with maybe_stage(self.timer, "ea_generation"):
            moved = mopso_generation(state, params, self.instance, rng, self.objective_scale, self.archive_limit)
        # advance() merges evaluated individuals into the archive again; pass none
        result = self.advance(state, moved.population, [])
        result.archive = moved.archive
        result.evaluations = moved.evaluations
        return result
