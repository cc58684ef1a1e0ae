"""
Distance-based quality indicators against a reference front
"""

import numpy as np
from scipy.spatial import distance

from errors import DimensionError
from .dominance import as_point_matrix


def _pair(front, reference_front):
    a = as_point_matrix(front)
    z = as_point_matrix(reference_front)
    if a.shape[1] != z.shape[1]:
        raise DimensionError(f"front has {a.shape[1]} objectives, reference front {z.shape[1]}")
    return a, z


def igd(front, reference_front) -> float:
    """Mean over reference points of the Euclidean distance to the nearest front point"""
    a, z = _pair(front, reference_front)
    return float(distance.cdist(z, a).min(axis=1).mean())


def igd_plus(front, reference_front) -> float:
    """
    IGD+ (minimization): only the amount by which a front point is worse than
    the reference point counts in each coordinate
    """
    a, z = _pair(front, reference_front)
    excess = np.maximum(a[None, :, :] - z[:, None, :], 0.0)
    return float(np.sqrt((excess ** 2).sum(axis=2)).min(axis=1).mean())
