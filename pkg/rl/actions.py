"""
Mapping from normalized policy actions to algorithm parameters
"""

from typing import Sequence

import numpy as np

from errors import DimensionError
from moea import ParamSpace


def map_action(action: Sequence[float], space: ParamSpace) -> np.ndarray:
    """
    Affine map of a in [-1, 1]^k onto the box low + (a + 1) / 2 * (high - low)

    Components outside [-1, 1] are clamped first.
    """
    a = np.clip(np.asarray(action, dtype=np.float64).reshape(-1), -1.0, 1.0)
    if a.size != space.dim:
        raise DimensionError(f"action has {a.size} components, parameter space {space.names} has {space.dim}")
    low = np.asarray(space.low, dtype=np.float64)
    high = np.asarray(space.high, dtype=np.float64)
    return low + (a + 1.0) / 2.0 * (high - low)


def unmap_params(values: Sequence[float], space: ParamSpace) -> np.ndarray:
    """Inverse of map_action; used to express static parameters as an action"""
    low = np.asarray(space.low, dtype=np.float64)
    high = np.asarray(space.high, dtype=np.float64)
    return 2.0 * (np.asarray(values, dtype=np.float64) - low) / (high - low) - 1.0
