"""
Utility modules
"""

from .seeding import derive_seed, make_rng, spawn_seeds
from .timing import STAGES, StageTimer, maybe_stage

__all__ = ["derive_seed", "make_rng", "spawn_seeds", "STAGES", "StageTimer", "maybe_stage"]
