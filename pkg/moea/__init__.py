"""
Configurable target algorithms: NSGA-II for FJSP and CVRP, MOPSO for CVRP
"""

from .base import Individual, OperatorSuite, ParamSpace, SearchState, TargetAlgorithm, update_archive
from .cvrp_operators import CvrpGenome, CvrpSuite, crossover_cvrp, decode_cvrp_keys, ordered_crossover, shuffle_mutation
from .factory import make_algorithm
from .fjsp_operators import (
    FjspGenome,
    FjspSuite,
    crossover_fjsp,
    init_population_fjsp,
    mutate_fjsp,
    pox,
    validate_genome,
)
from .mopso import V_MAX, V_MIN, Mopso, MopsoParams, Particle, mopso_generation
from .nsga2 import Nsga2, Nsga2Params, binary_tournament, nsga2_generation, select_survivors

__all__ = [
    "Individual",
    "OperatorSuite",
    "ParamSpace",
    "SearchState",
    "TargetAlgorithm",
    "update_archive",
    "CvrpGenome",
    "CvrpSuite",
    "crossover_cvrp",
    "decode_cvrp_keys",
    "ordered_crossover",
    "shuffle_mutation",
    "make_algorithm",
    "FjspGenome",
    "FjspSuite",
    "crossover_fjsp",
    "init_population_fjsp",
    "mutate_fjsp",
    "pox",
    "validate_genome",
    "V_MAX",
    "V_MIN",
    "Mopso",
    "MopsoParams",
    "Particle",
    "mopso_generation",
    "Nsga2",
    "Nsga2Params",
    "binary_tournament",
    "nsga2_generation",
    "select_survivors",
]
