"""
Clipped-surrogate PPO update for the numpy policy
"""

import logging
from typing import Dict, List

import numpy as np

from config import PpoConfig
from errors import TrainingError
from neural import Adam, PolicyNet, clip_grad_norm, gaussian_entropy, gaussian_log_prob
from .buffer import Trajectory, Transition, compute_gae, normalize_advantages

logger = logging.getLogger(__name__)


def flatten_trajectories(trajectories: List[Trajectory], gamma: float, lam: float):
    """Concatenate transitions with their advantages and value targets"""
    transitions: List[Transition] = []
    advantages, returns = [], []
    for traj in trajectories:
        adv, ret = compute_gae(traj.rewards, traj.values, traj.dones, traj.last_value, gamma, lam)
        transitions.extend(traj.transitions)
        advantages.append(adv)
        returns.append(ret)
    if not transitions:
        return transitions, np.zeros(0), np.zeros(0)
    return transitions, np.concatenate(advantages), np.concatenate(returns)


def ppo_update(
    policy: PolicyNet,
    optimizer: Adam,
    trajectories: List[Trajectory],
    cfg: PpoConfig,
    rng: np.random.Generator,
) -> Dict[str, float]:
    """
    Run update_epochs passes of minibatch gradient descent on the PPO loss

    loss = -mean(min(r A, clip(r, 1 - eps, 1 + eps) A))
           + value_coef * mean((V - R)^2) - entropy_coef * entropy

    Args:
        policy: Policy updated in place
        optimizer: Adam state for policy.params
        trajectories: Collected experience
        cfg: PPO hyperparameters
        rng: Stream used to shuffle minibatches

    Returns:
        Mean policy/value loss, entropy, approximate KL and clip fraction
    """
    transitions, advantages, returns = flatten_trajectories(trajectories, cfg.gamma, cfg.gae_lambda)
    n = len(transitions)
    if n == 0:
        raise TrainingError("no transitions to update from")
    advantages = normalize_advantages(advantages)
    old_log_probs = np.array([t.log_prob for t in transitions])
    eps = cfg.clip_ratio

    stats = {"policy_loss": [], "value_loss": [], "entropy": [], "approx_kl": [], "clip_fraction": [], "grad_norm": []}
    for _ in range(cfg.update_epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.minibatch_size):
            idx = order[start : start + cfg.minibatch_size]
            size = len(idx)
            grads = {name: np.zeros_like(p) for name, p in policy.params.items()}
            log_std = policy.log_std.copy()
            var = np.exp(2.0 * log_std)
            policy_loss = value_loss = 0.0
            kl = clipped = 0.0
            for i in idx:
                tr = transitions[i]
                out = policy.forward(tr.state)
                logp = gaussian_log_prob(tr.action, out.action_mean, log_std)
                ratio = float(np.exp(logp - old_log_probs[i]))
                adv = advantages[i]
                bounded = float(np.clip(ratio, 1.0 - eps, 1.0 + eps))
                policy_loss -= min(ratio * adv, bounded * adv) / size
                value_loss += (out.value - returns[i]) ** 2 / size
                kl += (old_log_probs[i] - logp) / size
                clipped += float(abs(ratio - 1.0) > eps) / size

                # gradient flows through the unclipped term only when it is the minimum
                g_logp = -adv * ratio / size if ratio * adv <= bounded * adv else 0.0
                diff = tr.action - out.action_mean
                sample_grads = policy.backward(
                    out.cache,
                    {
                        "action_mean": g_logp * diff / var,
                        "log_std": g_logp * (diff * diff / var - 1.0),
                        "value": cfg.value_coef * 2.0 * (out.value - returns[i]) / size,
                    },
                )
                for name, g in sample_grads.items():
                    grads[name] += g

            entropy = gaussian_entropy(log_std)
            grads["log_std"] -= cfg.entropy_coef
            loss = policy_loss + cfg.value_coef * value_loss - cfg.entropy_coef * entropy
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss {loss} (policy {policy_loss}, value {value_loss}, log_std {log_std.tolist()})"
                )
            stats["grad_norm"].append(clip_grad_norm(grads, cfg.max_grad_norm))
            optimizer.step(policy.params, grads)
            policy.clamp_log_std()
            policy.mark_updated()

            stats["policy_loss"].append(policy_loss)
            stats["value_loss"].append(value_loss)
            stats["entropy"].append(entropy)
            stats["approx_kl"].append(kl)
            stats["clip_fraction"].append(clipped)

    summary = {key: float(np.mean(values)) for key, values in stats.items()}
    summary["num_transitions"] = n
    logger.debug(f"PPO update over {n} transitions: {summary}")
    return summary
