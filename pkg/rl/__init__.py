"""
Episode environment, reward, bootstrapping and PPO training
"""

from .actions import map_action, unmap_params
from .bootstrap import bootstrap_instance_meta
from .buffer import Trajectory, Transition, compute_gae, normalize_advantages
from .env import EpisodeEnv, StepResult
from .ppo import flatten_trajectories, ppo_update
from .reward import improvement_reward, normalized_improvement
from .rollout import RolloutBatch, RolloutWorker, collect_rollouts
from .evaluation import Controller, EpisodeResult, PolicyController, StaticController, run_episode
from .trainer import Trainer

__all__ = [
    "map_action",
    "unmap_params",
    "bootstrap_instance_meta",
    "Trajectory",
    "Transition",
    "compute_gae",
    "normalize_advantages",
    "EpisodeEnv",
    "StepResult",
    "flatten_trajectories",
    "ppo_update",
    "improvement_reward",
    "normalized_improvement",
    "RolloutBatch",
    "RolloutWorker",
    "collect_rollouts",
    "Controller",
    "EpisodeResult",
    "PolicyController",
    "StaticController",
    "run_episode",
    "Trainer",
]
