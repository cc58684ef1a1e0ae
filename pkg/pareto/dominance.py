"""
Pareto dominance, non-dominated sorting and crowding distance (minimization)
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from errors import DimensionError


def as_point_matrix(points, allow_empty: bool = False) -> np.ndarray:
    """
    Stack objective vectors into an (n, m) float64 matrix

    Raises:
        DimensionError: on mixed lengths
        ValueError: on an empty input unless allow_empty
    """
    if isinstance(points, np.ndarray) and points.ndim == 2:
        matrix = points.astype(np.float64, copy=False)
    else:
        rows = [np.asarray(p, dtype=np.float64).reshape(-1) for p in points]
        if rows and len({len(r) for r in rows}) > 1:
            raise DimensionError(f"mixed objective counts: {sorted({len(r) for r in rows})}")
        matrix = np.vstack(rows) if rows else np.empty((0, 0))
    if matrix.shape[0] == 0 and not allow_empty:
        raise ValueError("at least one objective vector is required")
    return matrix


def dominates(a, b) -> bool:
    """True iff a is no worse than b everywhere and strictly better somewhere"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare vectors of length {a.size} and {b.size}")
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(points: np.ndarray) -> np.ndarray:
    """D[i, j] is True when point i dominates point j"""
    le = np.all(points[:, None, :] <= points[None, :, :], axis=2)
    lt = np.any(points[:, None, :] < points[None, :, :], axis=2)
    return le & lt


@dataclass
class FrontPartition:
    """Ranked fronts; fronts[0] is the non-dominated set"""

    fronts: List[List[int]]
    rank: np.ndarray

    def __len__(self) -> int:
        return len(self.fronts)


def non_dominated_sort(points) -> FrontPartition:
    """
    Partition points into Pareto fronts by iterated removal of the non-dominated set

    Members within a front keep ascending input order.

    Args:
        points: Non-empty sequence of equal-length objective vectors

    Returns:
        FrontPartition
    """
    matrix = as_point_matrix(points)
    n = matrix.shape[0]
    dom = dominance_matrix(matrix)
    dominated_by = dom.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    fronts = []
    current = np.flatnonzero(dominated_by == 0)
    while current.size:
        rank[current] = len(fronts)
        fronts.append(current.tolist())
        dominated_by = dominated_by - dom[current].sum(axis=0)
        current = np.flatnonzero((dominated_by == 0) & (rank < 0))
    return FrontPartition(fronts=fronts, rank=rank)


def non_dominated_mask(points) -> np.ndarray:
    """Boolean mask of the first front"""
    matrix = as_point_matrix(points)
    return ~dominance_matrix(matrix).any(axis=0)


def pareto_filter(points) -> np.ndarray:
    """Unique non-dominated rows, sorted lexicographically"""
    matrix = as_point_matrix(points, allow_empty=True)
    if matrix.shape[0] == 0:
        return matrix
    matrix = np.unique(matrix, axis=0)
    return matrix[non_dominated_mask(matrix)]


def crowding_distance(front) -> np.ndarray:
    """
    Crowding distance of each member of one front

    Boundary points per objective get +inf; objectives with zero spread
    contribute nothing. Fronts of size <= 2 are all +inf.
    """
    matrix = as_point_matrix(front)
    n, m = matrix.shape
    distance = np.zeros(n, dtype=np.float64)
    if n <= 2:
        distance[:] = np.inf
        return distance
    for k in range(m):
        order = np.argsort(matrix[:, k], kind="stable")
        values = matrix[order, k]
        span = values[-1] - values[0]
        if span <= 0.0:
            continue
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        distance[order[1:-1]] += (values[2:] - values[:-2]) / span
    return distance


def count_non_dominated(points: Sequence) -> int:
    """Number of distinct objective vectors on the first front"""
    matrix = as_point_matrix(points, allow_empty=True)
    return int(pareto_filter(matrix).shape[0]) if matrix.shape[0] else 0
