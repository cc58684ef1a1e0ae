"""
Base instance interface shared by the scheduling and routing problems
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict

import numpy as np


class ObjectiveSet(Enum):
    """Active objective prefix; the value is the number of objectives"""

    BI = 2
    TRI = 3
    PENTA = 5

    @classmethod
    def parse(cls, name: str) -> "ObjectiveSet":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown objective set {name!r}; expected bi, tri or penta")

    @property
    def label(self) -> str:
        return self.name.lower()


def as_objective_vector(values) -> np.ndarray:
    """Coerce to a 1-D float64 array and reject non-finite entries"""
    vec = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"objective vector has non-finite entries: {vec}")
    return vec


class ProblemInstance(ABC):
    """
    Abstract base class for immutable problem instances

    Concrete instances carry a `seed` field holding the generation seed.
    """

    kind: str = ""

    @property
    @abstractmethod
    def size_label(self) -> str:
        """Short size tag such as '5j5m' or '100'"""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready payload for the "data" section of an instance file"""
        pass
