"""
Construct the target algorithm matching an instance and experiment profile
"""

from typing import Optional

from errors import ConfigError
from problems import CvrpInstance, FjspInstance, ObjectiveSet, ProblemInstance
from .base import TargetAlgorithm
from .cvrp_operators import CvrpSuite
from .fjsp_operators import FjspSuite
from .mopso import Mopso
from .nsga2 import Nsga2


def make_algorithm(
    name: str,
    instance: ProblemInstance,
    objective_set: ObjectiveSet = ObjectiveSet.BI,
    population_size: int = 50,
    objective_scale: float = 1.0,
    archive_limit: Optional[int] = None,
) -> TargetAlgorithm:
    """
    Args:
        name: "nsga2" or "mopso"
        instance: FJSP or CVRP instance the search runs on
        objective_set: Active FJSP objectives (CVRP is always bi-objective)
        population_size: Individuals (or particles) per generation
        objective_scale: Positive factor applied to every objective value
        archive_limit: Optional MOPSO archive capacity

    Returns:
        TargetAlgorithm ready for initialize()
    """
    if name == "nsga2":
        if isinstance(instance, FjspInstance):
            return Nsga2(FjspSuite(instance, objective_set, objective_scale), population_size)
        if isinstance(instance, CvrpInstance):
            if objective_set is not ObjectiveSet.BI:
                raise ConfigError(f"objective_set: CVRP only supports bi, got {objective_set.label}")
            return Nsga2(CvrpSuite(instance, objective_scale), population_size)
    elif name == "mopso":
        if isinstance(instance, CvrpInstance):
            return Mopso(instance, population_size, objective_scale, archive_limit)
        raise ConfigError("algorithm: mopso requires a CVRP instance")
    else:
        raise ConfigError(f"algorithm: unknown target algorithm {name!r}")
    raise ConfigError(f"problem: unsupported instance type {type(instance).__name__}")
