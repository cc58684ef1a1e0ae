"""
Capacitated vehicle routing: instances, random generation, route splitting and objective evaluation
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import distance

from errors import InfeasibleSolutionError, InstanceError
from .base import ProblemInstance

OBJECTIVE_NAMES = ("total_distance", "longest_route")

DISTRIBUTIONS = ("uniform", "clustered")


@dataclass(frozen=True)
class CvrpGenConfig:
    """
    Sampling settings for random CVRP instances

    "clustered" draws customers from Normal(cluster_mean, cluster_std) clipped to
    the unit square, with outlier_share of them drawn uniformly instead.
    """

    demand_range: Tuple[int, int] = (1, 9)
    capacity: int = 40
    distribution: str = "uniform"
    cluster_mean: float = 0.3
    cluster_std: float = 0.1
    outlier_share: float = 0.05

    def validate(self) -> None:
        lo, hi = self.demand_range
        if lo > hi or lo < 1:
            raise InstanceError(f"demand_range must satisfy 1 <= min <= max, got {self.demand_range}")
        if hi > self.capacity:
            raise InstanceError(f"maximum demand {hi} exceeds capacity {self.capacity}")
        if self.distribution not in DISTRIBUTIONS:
            raise InstanceError(f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}")
        if not 0.0 <= self.outlier_share <= 1.0:
            raise InstanceError("outlier_share must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class CvrpInstance(ProblemInstance):
    """A CVRP instance; customers are indexed 0..n-1, the depot is separate"""

    kind: ClassVar[str] = "cvrp"

    depot: np.ndarray
    coords: np.ndarray
    demands: np.ndarray
    capacity: int
    seed: int = 0

    def __post_init__(self):
        depot = np.array(self.depot, dtype=np.float64).reshape(2)
        coords = np.array(self.coords, dtype=np.float64).reshape(-1, 2)
        demands = np.array(self.demands, dtype=np.int64).reshape(-1)
        if len(coords) < 1 or len(coords) != len(demands):
            raise InstanceError("need at least one customer and one demand per customer")
        if self.capacity < 1:
            raise InstanceError("capacity must be positive")
        if np.any(demands < 1) or np.any(demands > self.capacity):
            raise InstanceError(f"demands must lie in [1, {self.capacity}]")
        for arr in (depot, coords):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise InstanceError("coordinates must lie in the unit square")
            arr.setflags(write=False)
        demands.setflags(write=False)
        object.__setattr__(self, "depot", depot)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "capacity", int(self.capacity))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CvrpInstance):
            return NotImplemented
        return (
            self.capacity == other.capacity
            and self.seed == other.seed
            and np.array_equal(self.depot, other.depot)
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.demands, other.demands)
        )

    __hash__ = None

    @property
    def num_customers(self) -> int:
        return int(len(self.demands))

    @property
    def size_label(self) -> str:
        return str(self.num_customers)

    @cached_property
    def distances(self) -> np.ndarray:
        """Euclidean distance matrix; row/column 0 is the depot, customer i is i+1"""
        points = np.vstack([self.depot, self.coords])
        matrix = distance.cdist(points, points)
        matrix.setflags(write=False)
        return matrix

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depot": [float(v) for v in self.depot],
            "customers": [
                {"x": float(x), "y": float(y), "demand": int(q)}
                for (x, y), q in zip(self.coords, self.demands)
            ],
            "capacity": self.capacity,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], seed: int = 0) -> "CvrpInstance":
        try:
            customers = data["customers"]
            return cls(
                depot=np.array(data["depot"], dtype=np.float64),
                coords=np.array([[c["x"], c["y"]] for c in customers], dtype=np.float64),
                demands=np.array([c["demand"] for c in customers], dtype=np.int64),
                capacity=int(data["capacity"]),
                seed=seed,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceError(f"malformed cvrp data: {e}")


def generate_cvrp(seed: int, num_customers: int, cfg: Optional[CvrpGenConfig] = None) -> CvrpInstance:
    """
    Draw a random CVRP instance

    Args:
        seed: Generation seed
        num_customers: Number of customers
        cfg: Demand range, capacity and coordinate distribution

    Returns:
        CvrpInstance, identical for identical arguments
    """
    cfg = cfg or CvrpGenConfig()
    cfg.validate()
    if num_customers < 1:
        raise InstanceError("num_customers must be at least 1")

    rng = np.random.default_rng(seed)
    depot = rng.random(2)
    if cfg.distribution == "uniform":
        coords = rng.random((num_customers, 2))
    else:
        coords = np.clip(rng.normal(cfg.cluster_mean, cfg.cluster_std, size=(num_customers, 2)), 0.0, 1.0)
        outliers = rng.random(num_customers) < cfg.outlier_share
        coords[outliers] = rng.random((int(outliers.sum()), 2))
    lo, hi = cfg.demand_range
    demands = rng.integers(lo, hi + 1, size=num_customers)
    return CvrpInstance(depot=depot, coords=coords, demands=demands, capacity=cfg.capacity, seed=seed)


def split_routes(instance: CvrpInstance, order: Sequence[int]) -> List[List[int]]:
    """
    Sequential capacity split of a giant tour

    A new route starts whenever adding the next customer would exceed capacity.
    """
    routes: List[List[int]] = []
    current: List[int] = []
    load = 0
    demands = instance.demands
    for customer in order:
        customer = int(customer)
        q = int(demands[customer])
        if current and load + q > instance.capacity:
            routes.append(current)
            current, load = [], 0
        current.append(customer)
        load += q
    if current:
        routes.append(current)
    return routes


def route_length(instance: CvrpInstance, route: Sequence[int]) -> float:
    """Depot -> customers -> depot distance of one route"""
    if len(route) == 0:
        return 0.0
    stops = np.concatenate(([0], np.asarray(route, dtype=np.int64) + 1, [0]))
    return float(instance.distances[stops[:-1], stops[1:]].sum())


def evaluate_cvrp(instance: CvrpInstance, routes: Sequence[Sequence[int]], check: bool = True) -> np.ndarray:
    """
    Objective vector [D_total, D_max] of a route set

    Args:
        instance: Problem instance
        routes: Customer index sequences, one per vehicle
        check: Validate partition and capacity first

    Returns:
        Objective vector (minimization)
    """
    if check:
        visited = np.concatenate([np.asarray(r, dtype=np.int64) for r in routes]) if routes else np.array([], dtype=np.int64)
        counts = np.bincount(visited[(visited >= 0) & (visited < instance.num_customers)], minlength=instance.num_customers)
        if len(visited) and (visited.min() < 0 or visited.max() >= instance.num_customers):
            raise InfeasibleSolutionError("partition", "route references an unknown customer")
        if np.any(counts == 0):
            raise InfeasibleSolutionError("partition", f"customers never visited: {np.flatnonzero(counts == 0).tolist()}")
        if np.any(counts > 1):
            raise InfeasibleSolutionError("partition", f"customers visited twice: {np.flatnonzero(counts > 1).tolist()}")
        for k, route in enumerate(routes):
            load = int(instance.demands[np.asarray(route, dtype=np.int64)].sum()) if len(route) else 0
            if load > instance.capacity:
                raise InfeasibleSolutionError("capacity", f"route {k} carries {load} > {instance.capacity}")

    lengths = [route_length(instance, r) for r in routes] or [0.0]
    return np.array([sum(lengths), max(lengths)], dtype=np.float64)
