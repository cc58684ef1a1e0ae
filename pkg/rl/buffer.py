"""
Trajectory storage and generalized advantage estimation
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from graphstate import StateGraph


@dataclass
class Transition:
    state: StateGraph
    action: np.ndarray
    log_prob: float
    reward: float
    value: float
    done: bool


@dataclass
class Trajectory:
    """
    Consecutive transitions of one worker

    last_value is the critic's estimate of the state after the final
    transition; it is ignored when that transition ended the episode.
    """

    worker: int
    transitions: List[Transition] = field(default_factory=list)
    last_value: float = 0.0

    def __len__(self) -> int:
        return len(self.transitions)

    @property
    def rewards(self) -> np.ndarray:
        return np.array([t.reward for t in self.transitions], dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return np.array([t.value for t in self.transitions], dtype=np.float64)

    @property
    def dones(self) -> np.ndarray:
        return np.array([t.done for t in self.transitions], dtype=bool)


def compute_gae(
    rewards: Sequence[float],
    values: Sequence[float],
    dones: Sequence[bool],
    last_value: float,
    gamma: float,
    lam: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Generalized advantage estimates and value targets

    Args:
        rewards: r_t per step
        values: V(s_t) per step
        dones: True where the step ended an episode
        last_value: V(s_T) after the final step, used only if it did not end an episode
        gamma: Discount factor
        lam: GAE smoothing factor

    Returns:
        (advantages, returns) with returns = advantages + values
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    dones = np.asarray(dones, dtype=bool)
    advantages = np.zeros_like(rewards)
    gae = 0.0
    next_value = last_value
    for t in reversed(range(len(rewards))):
        nonterminal = 0.0 if dones[t] else 1.0
        delta = rewards[t] + gamma * next_value * nonterminal - values[t]
        gae = delta + gamma * lam * nonterminal * gae
        advantages[t] = gae
        next_value = values[t]
    return advantages, advantages + values


def normalize_advantages(advantages: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Zero mean and unit variance for batches larger than one"""
    advantages = np.asarray(advantages, dtype=np.float64)
    if advantages.size < 2:
        return advantages.copy()
    return (advantages - advantages.mean()) / (advantages.std() + eps)
