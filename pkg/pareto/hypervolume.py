"""
Exact hypervolume indicator

Two objectives use a staircase sweep; three or more use WFG-style exclusive
contributions with non-dominated filtering of every limited set.
"""

import numpy as np

from errors import DimensionError
from .dominance import as_point_matrix, non_dominated_mask


def _box_volume(point: np.ndarray, reference_point: np.ndarray) -> float:
    return float(np.prod(reference_point - point))


def _sweep_2d(points: np.ndarray, reference_point: np.ndarray) -> float:
    # points are mutually non-dominated, so y falls as x rises
    order = np.lexsort((points[:, 1], points[:, 0]))
    xs = points[order, 0]
    ys = points[order, 1]
    widths = np.append(xs[1:], reference_point[0]) - xs
    return float(np.sum(widths * (reference_point[1] - ys)))


def _limit(point: np.ndarray, rest: np.ndarray) -> np.ndarray:
    limited = np.unique(np.maximum(rest, point), axis=0)
    return limited[non_dominated_mask(limited)]


def _wfg(points: np.ndarray, reference_point: np.ndarray) -> float:
    n = points.shape[0]
    if n == 1:
        return _box_volume(points[0], reference_point)
    if points.shape[1] == 2:
        return _sweep_2d(points, reference_point)

    points = points[np.argsort(points[:, 0], kind="stable")]
    volume = 0.0
    for i in range(n):
        exclusive = _box_volume(points[i], reference_point)
        if i + 1 < n:
            exclusive -= _wfg(_limit(points[i], points[i + 1:]), reference_point)
        volume += exclusive
    return volume


def hypervolume(points, reference_point) -> float:
    """
    Lebesgue measure of the region dominated by points and bounded by reference_point

    Points that are not strictly better than the reference point in every
    objective contribute nothing; duplicates and dominated points are ignored.

    Args:
        points: Objective vectors (minimization); may be empty
        reference_point: Upper corner of the measured region

    Returns:
        Nonnegative volume
    """
    r = np.asarray(reference_point, dtype=np.float64).reshape(-1)
    matrix = as_point_matrix(points, allow_empty=True)
    if matrix.shape[0] == 0:
        return 0.0
    if matrix.shape[1] != r.size:
        raise DimensionError(f"points have {matrix.shape[1]} objectives, reference point {r.size}")

    matrix = matrix[np.all(matrix < r, axis=1)]
    if matrix.shape[0] == 0:
        return 0.0
    matrix = np.unique(matrix, axis=0)
    matrix = matrix[non_dominated_mask(matrix)]
    if r.size == 1:
        return float(r[0] - matrix.min())
    return _wfg(matrix, r)
