"""
Reference and ideal point bootstrapping by an extended vanilla run
"""

import logging

import numpy as np

from moea import TargetAlgorithm
from pareto import hypervolume
from problems import InstanceMeta

logger = logging.getLogger(__name__)

CANONICAL_SEED = 0
BUDGET_FACTOR = 2


def bootstrap_instance_meta(algorithm: TargetAlgorithm, budget: int, seed: int = 0, profile: str = "") -> InstanceMeta:
    """
    Derive an instance's evaluation reference data

    reference_point is the per-objective worst of generation 0 of a
    canonical seed-0 run. ideal_point is the per-objective best over every
    evaluation of a static-parameter run lasting twice the budget (plus that
    canonical generation 0).

    Args:
        algorithm: Target algorithm bound to the instance
        budget: Episode generation budget; the run lasts BUDGET_FACTOR times as long
        seed: Seed of the extended run
        profile: Tag stored in the meta, e.g. "nsga2/bi"

    Returns:
        InstanceMeta with hv_ideal = HV({ideal_point}, reference_point)
    """
    timer, algorithm.timer = algorithm.timer, None
    try:
        canonical = algorithm.initialize(np.random.default_rng(CANONICAL_SEED))
        reference = canonical.nadir.copy()
        ideal = canonical.objective_matrix().min(axis=0)

        rng = np.random.default_rng(seed)
        state = algorithm.initialize(rng)
        params = algorithm.static_params()
        for _ in range(BUDGET_FACTOR * budget):
            state = algorithm.step(state, params, rng)
        # the archive holds every per-objective minimum seen during the run
        ideal = np.minimum(ideal, state.archive_matrix().min(axis=0))
        ideal = np.minimum(ideal, state.objective_matrix().min(axis=0))
    finally:
        algorithm.timer = timer

    hv_ideal = hypervolume(ideal[None, :], reference)
    logger.debug(f"Bootstrapped {profile or algorithm.name}: reference {reference.tolist()}, ideal {ideal.tolist()}")
    return InstanceMeta(reference_point=reference, ideal_point=ideal, source_seed=seed, hv_ideal=hv_ideal, profile=profile)
