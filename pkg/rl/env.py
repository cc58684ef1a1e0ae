"""
One episode = one run of a target algorithm; one step = one generation
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from errors import DimensionError, EnvironmentStateError
from graphstate import NormalizationContext, StateGraph, build_state_graph
from moea import SearchState, TargetAlgorithm
from pareto import hypervolume
from problems import InstanceMeta
from utils import StageTimer, maybe_stage
from .actions import map_action
from .bootstrap import bootstrap_instance_meta
from .reward import DEGENERATE_SPAN, improvement_reward, normalized_improvement


@dataclass
class StepResult:
    graph: StateGraph
    reward: float
    done: bool
    info: Dict[str, Any] = field(default_factory=dict)


class EpisodeEnv:
    """
    Environment wrapping a target algorithm on one instance

    The reward compares the population hypervolume (against the nadir of
    generation 0) with the best seen so far, normalized by the gap between the
    initial hypervolume and the one spanned by the bootstrapped ideal point.
    """

    def __init__(
        self,
        algorithm: TargetAlgorithm,
        meta: Optional[InstanceMeta] = None,
        budget: int = 50,
        timer: Optional[StageTimer] = None,
        auto_bootstrap: bool = False,
        name: str = "",
    ):
        """
        Args:
            algorithm: Target algorithm bound to its instance
            meta: Bootstrapped instance meta providing the ideal point
            budget: Generations per episode
            timer: Optional stage timer shared with the algorithm
            auto_bootstrap: Bootstrap the meta on first reset when it is missing
            name: Label used in log messages
        """
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        self.algorithm = algorithm
        self.meta = meta
        self.budget = budget
        self.timer = timer
        self.algorithm.timer = timer
        self.auto_bootstrap = auto_bootstrap
        self.name = name
        self.logger = logging.getLogger(self.__class__.__name__)

        self.state: Optional[SearchState] = None
        self.ctx: Optional[NormalizationContext] = None
        self.hv_ideal = 0.0
        self.done = True
        self.episode_return = 0.0
        self.rng: Optional[np.random.Generator] = None

    @property
    def param_space(self):
        return self.algorithm.param_space

    @property
    def num_objectives(self) -> int:
        return self.algorithm.num_objectives

    @property
    def delta_best(self) -> float:
        """Normalized improvement of the best hypervolume so far"""
        if self.state is None:
            return 0.0
        return normalized_improvement(self.state.hv_best, self.state.hv_initial, self.hv_ideal)

    def _ideal_point(self) -> np.ndarray:
        if self.meta is None:
            if not self.auto_bootstrap:
                raise EnvironmentStateError(f"instance {self.name or '?'} has no ideal point; run bootstrap first")
            self.logger.info(f"Bootstrapping missing meta for {self.name or 'instance'}")
            self.meta = bootstrap_instance_meta(self.algorithm, self.budget, seed=0)
        ideal = self.meta.ideal_point
        if ideal.size != self.num_objectives:
            raise DimensionError(f"meta has {ideal.size} objectives, algorithm has {self.num_objectives}")
        return ideal

    def _graph(self) -> StateGraph:
        with maybe_stage(self.timer, "state_graph"):
            objectives = self.state.objective_matrix()
            self.ctx.update(objectives)
            return build_state_graph(objectives, self.ctx, self.state.generation, self.budget)

    def reset(self, seed: int) -> StateGraph:
        """Start a fresh run and return the generation-0 graph"""
        ideal = self._ideal_point()
        self.rng = np.random.default_rng(seed)
        with maybe_stage(self.timer, "setup"):
            self.state = self.algorithm.initialize(self.rng)
            objectives = self.state.objective_matrix()
            self.ctx = NormalizationContext.from_initial(objectives)
            ideal_eff = np.minimum(ideal, objectives.min(axis=0))
            self.hv_ideal = max(hypervolume(ideal_eff[None, :], self.state.nadir), self.state.hv_initial)
        if self.hv_ideal - self.state.hv_initial < DEGENERATE_SPAN:
            self.logger.debug(f"Degenerate hypervolume gap on {self.name or 'instance'}; rewards will be zero")
        self.done = self.budget == 0
        self.episode_return = 0.0
        return self._graph()

    def step(self, action: Sequence[float]) -> StepResult:
        """Run one generation with parameters mapped from a normalized action"""
        return self.step_values(map_action(action, self.param_space))

    def step_values(self, values: Sequence[float]) -> StepResult:
        """Run one generation with raw parameter values in param_space order"""
        if self.state is None:
            raise EnvironmentStateError("step called before reset")
        if self.done:
            raise EnvironmentStateError("episode is done; call reset")
        params = self.algorithm.make_params(values)
        hv_best = self.state.hv_best
        self.state = self.algorithm.step(self.state, params, self.rng)
        reward = improvement_reward(self.state.hv_current, hv_best, self.state.hv_initial, self.hv_ideal)
        self.episode_return += reward
        self.done = self.state.generation >= self.budget
        graph = self._graph()
        info = {
            "generation": self.state.generation,
            "params": [float(v) for v in values],
            "hv": self.state.hv_current,
            "hv_best": self.state.hv_best,
            "delta_best": self.delta_best,
        }
        return StepResult(graph=graph, reward=reward, done=self.done, info=info)
