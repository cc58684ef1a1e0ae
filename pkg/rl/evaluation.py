"""
Running whole episodes under a learned policy or fixed parameters
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from graphstate import StateGraph
from neural import PolicyNet
from utils import maybe_stage
from .actions import map_action
from .env import EpisodeEnv


class Controller(ABC):
    """Chooses each generation's parameters"""

    name: str = ""

    @abstractmethod
    def choose(self, env: EpisodeEnv, graph: StateGraph) -> np.ndarray:
        """Raw parameter values in the env's param_space order"""
        pass


class StaticController(Controller):
    """The algorithm's rule-of-thumb parameters at every generation"""

    name = "static"

    def choose(self, env: EpisodeEnv, graph: StateGraph) -> np.ndarray:
        return np.asarray(env.algorithm.static_values, dtype=np.float64)


class PolicyController(Controller):
    """
    Parameters from a trained policy

    Without an rng the action is the policy mean; with one it is sampled.
    """

    def __init__(self, policy: PolicyNet, name: str = "policy", rng: Optional[np.random.Generator] = None):
        self.policy = policy
        self.name = name
        self.rng = rng

    def choose(self, env: EpisodeEnv, graph: StateGraph) -> np.ndarray:
        with maybe_stage(env.timer, "policy_inference"):
            decision = self.policy.act(graph, self.rng)
        return map_action(decision["action"], env.param_space)


@dataclass
class EpisodeResult:
    front: np.ndarray
    history: List[float]
    episode_return: float
    delta_best: float
    params: List[List[float]] = field(default_factory=list)


def run_episode(env: EpisodeEnv, seed: int, controller: Controller) -> EpisodeResult:
    """Reset env with seed and step it to the end of its budget"""
    graph = env.reset(seed)
    chosen = []
    while not env.done:
        values = controller.choose(env, graph)
        chosen.append([float(v) for v in values])
        graph = env.step_values(values).graph
    return EpisodeResult(
        front=env.state.front_matrix(),
        history=list(env.state.history),
        episode_return=env.episode_return,
        delta_best=env.delta_best,
        params=chosen,
    )
