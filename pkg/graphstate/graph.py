"""
Front-structured state graph fed to the policy
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from pareto import non_dominated_sort
from .normalization import NormalizationContext, normalize_objectives


@dataclass
class StateGraph:
    """
    One node per population member; edges join every pair on the same front

    edges is an (E, 2) integer array with i < j and no self-loops.
    """

    node_features: np.ndarray
    edges: np.ndarray
    budget_feature: float

    @property
    def num_nodes(self) -> int:
        return self.node_features.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.node_features.tolist(),
            "edges": self.edges.tolist(),
            "budget": self.budget_feature,
        }

    def dump(self, path: Union[str, Path]) -> None:
        """Write the graph as JSON for inspection"""
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def front_edges(objectives: np.ndarray) -> np.ndarray:
    """Complete subgraph per non-dominated front"""
    pairs = []
    for front in non_dominated_sort(objectives).fronts:
        members = sorted(front)
        if len(members) < 2:
            continue
        a, b = np.triu_indices(len(members), k=1)
        members = np.asarray(members)
        pairs.append(np.column_stack([members[a], members[b]]))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.vstack(pairs).astype(np.int64)


def build_state_graph(objectives: np.ndarray, ctx: NormalizationContext, generation: int, total_generations: int) -> StateGraph:
    """
    Args:
        objectives: Population objective matrix, one row per member
        ctx: Normalization bounds, already updated with this generation
        generation: Generations completed so far
        total_generations: Episode budget

    Returns:
        StateGraph with budget_feature = generation / total_generations
    """
    objectives = np.asarray(objectives, dtype=np.float64)
    budget = 0.0 if total_generations <= 0 else min(1.0, generation / total_generations)
    return StateGraph(
        node_features=normalize_objectives(objectives, ctx),
        edges=front_edges(objectives),
        budget_feature=float(budget),
    )
