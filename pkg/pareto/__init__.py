"""
Dominance machinery and multi-objective quality indicators
"""

from .dominance import (
    FrontPartition,
    count_non_dominated,
    crowding_distance,
    dominance_matrix,
    dominates,
    non_dominated_mask,
    non_dominated_sort,
    pareto_filter,
)
from .hypervolume import hypervolume
from .indicators import igd, igd_plus

__all__ = [
    "FrontPartition",
    "count_non_dominated",
    "crowding_distance",
    "dominance_matrix",
    "dominates",
    "non_dominated_mask",
    "non_dominated_sort",
    "pareto_filter",
    "hypervolume",
    "igd",
    "igd_plus",
]
