"""
Objective normalization against the episode's best-seen and initial-worst values
"""

from dataclasses import dataclass

import numpy as np

from errors import DimensionError


@dataclass
class NormalizationContext:
    """
    Per-objective bounds used to map objective vectors into [0, 1]

    best_so_far tracks the minimum seen during the episode; worst_initial is
    the maximum of generation 0 and never changes.
    """

    best_so_far: np.ndarray
    worst_initial: np.ndarray

    @classmethod
    def from_initial(cls, objectives: np.ndarray) -> "NormalizationContext":
        objectives = np.atleast_2d(np.asarray(objectives, dtype=np.float64))
        return cls(best_so_far=objectives.min(axis=0), worst_initial=objectives.max(axis=0))

    def update(self, objectives: np.ndarray) -> None:
        objectives = np.atleast_2d(np.asarray(objectives, dtype=np.float64))
        if objectives.shape[1] != len(self.best_so_far):
            raise DimensionError(f"expected {len(self.best_so_far)} objectives, got {objectives.shape[1]}")
        self.best_so_far = np.minimum(self.best_so_far, objectives.min(axis=0))

    def copy(self) -> "NormalizationContext":
        return NormalizationContext(self.best_so_far.copy(), self.worst_initial.copy())


def normalize_objectives(values, ctx: NormalizationContext) -> np.ndarray:
    """
    (v - best) / (worst - best) clamped into [0, 1]; degenerate coordinates map to 0

    Works on a single vector or a matrix of row vectors.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape[-1] != len(ctx.best_so_far):
        raise DimensionError(f"expected {len(ctx.best_so_far)} objectives, got {values.shape[-1]}")
    span = ctx.worst_initial - ctx.best_so_far
    safe = np.where(span > 0.0, span, 1.0)
    scaled = np.where(span > 0.0, (values - ctx.best_so_far) / safe, 0.0)
    return np.clip(scaled, 0.0, 1.0)
