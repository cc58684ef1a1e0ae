"""
Rollout workers and experience collection
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional

import numpy as np

from neural import PolicyNet
from utils import maybe_stage
from .buffer import Trajectory, Transition

logger = logging.getLogger(__name__)


@dataclass
class RolloutBatch:
    trajectories: List[Trajectory]
    episode_returns: List[float] = field(default_factory=list)
    final_deltas: List[float] = field(default_factory=list)

    @property
    def num_steps(self) -> int:
        return sum(len(t) for t in self.trajectories)


class RolloutWorker:
    """
    Owns one environment slot and its random stream

    Every finished episode is replaced by a fresh environment from make_env,
    which may sample a different instance.
    """

    def __init__(self, index: int, make_env: Callable[[np.random.Generator], Any]):
        self.index = index
        self.make_env = make_env
        self.rng: Optional[np.random.Generator] = None
        self.env = None
        self.graph = None
        self.current: Optional[Trajectory] = None

    def begin_epoch(self, seed: int) -> None:
        """Restart from a fresh episode seeded independently of earlier epochs"""
        self.rng = np.random.default_rng(seed)
        self.start_episode()

    def start_episode(self) -> None:
        self.env = self.make_env(self.rng)
        self.graph = self.env.reset(int(self.rng.integers(2**31)))
        self.current = Trajectory(worker=self.index)


def collect_rollouts(policy: PolicyNet, workers: List[RolloutWorker], steps_per_epoch: int) -> RolloutBatch:
    """
    Gather exactly steps_per_epoch transitions, stepping workers round-robin

    Actions are sampled from the Gaussian policy and clamped into [-1, 1];
    the stored action and log-probability are the unclamped sample. Segments
    cut at the epoch boundary are bootstrapped with the critic.

    Args:
        policy: Current policy (read only here)
        workers: Workers whose begin_epoch() has been called
        steps_per_epoch: Transition count to collect

    Returns:
        RolloutBatch with trajectories ordered by worker index
    """
    batch = RolloutBatch(trajectories=[])
    finished: List[Trajectory] = []
    count = 0
    while count < steps_per_epoch:
        for worker in workers:
            if count >= steps_per_epoch:
                break
            timer = getattr(worker.env, "timer", None)
            with maybe_stage(timer, "policy_inference"):
                decision = policy.act(worker.graph, worker.rng)
            result = worker.env.step(decision["action"])
            worker.current.transitions.append(
                Transition(
                    state=worker.graph,
                    action=decision["raw_action"],
                    log_prob=decision["log_prob"],
                    reward=result.reward,
                    value=decision["value"],
                    done=result.done,
                )
            )
            count += 1
            if result.done:
                finished.append(worker.current)
                batch.episode_returns.append(float(sum(t.reward for t in worker.current.transitions)))
                batch.final_deltas.append(float(getattr(worker.env, "delta_best", 0.0)))
                worker.start_episode()
            else:
                worker.graph = result.graph

    for worker in workers:
        if worker.current is not None and len(worker.current):
            worker.current.last_value = policy.forward(worker.graph).value
            finished.append(worker.current)
            worker.current = Trajectory(worker=worker.index)
    batch.trajectories = sorted(finished, key=lambda t: t.worker)
    return batch
