"""
GCN actor-critic policy over state graphs
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.stats import norm

from errors import DimensionError, StaleCacheError
from graphstate import StateGraph
from .layers import GcnLayer, Linear, normalized_adjacency, uniform_init

LOG_STD_INIT = math.log(0.5)
LOG_STD_MIN = math.log(0.01)
LOG_STD_MAX = 0.0


@dataclass(frozen=True)
class Architecture:
    obs_dim: int
    action_dim: int
    gcn_layers: int = 2
    hidden_dim: int = 64
    aux_dim: int = 1

    def __post_init__(self):
        if self.gcn_layers not in (1, 2):
            raise ValueError(f"gcn_layers must be 1 or 2, got {self.gcn_layers}")
        if self.aux_dim not in (0, 1):
            raise ValueError(f"aux_dim must be 0 or 1, got {self.aux_dim}")
        if min(self.obs_dim, self.action_dim, self.hidden_dim) < 1:
            raise ValueError("obs_dim, action_dim and hidden_dim must be positive")

    @property
    def embed_dim(self) -> int:
        return self.hidden_dim + self.aux_dim

    def to_dict(self) -> Dict[str, int]:
        return {
            "obs_dim": self.obs_dim,
            "action_dim": self.action_dim,
            "gcn_layers": self.gcn_layers,
            "hidden_dim": self.hidden_dim,
            "aux_dim": self.aux_dim,
        }


@dataclass
class PolicyOutput:
    action_mean: np.ndarray
    value: float
    cache: Dict[str, Any]


def gaussian_log_prob(action: np.ndarray, mean: np.ndarray, log_std: np.ndarray) -> float:
    """Diagonal Gaussian log-density summed over action components"""
    return float(norm.logpdf(action, loc=mean, scale=np.exp(log_std)).sum())


def gaussian_entropy(log_std: np.ndarray) -> float:
    return float(np.sum(log_std + 0.5 * math.log(2.0 * math.pi * math.e)))


class PolicyNet:
    """
    Shared GCN trunk with an actor head (tanh-squashed means) and a critic head

    Parameters live in an ordered dict of float64 arrays:
    gcn{i}.weight/bias, actor.weight/bias, critic.weight/bias, log_std.
    """

    def __init__(self, arch: Architecture, seed: int = 0):
        self.arch = arch
        self.version = 0
        self.logger = logging.getLogger(self.__class__.__name__)
        rng = np.random.default_rng(seed)
        params: Dict[str, np.ndarray] = {}
        fan_in = arch.obs_dim
        for i in range(arch.gcn_layers):
            params[f"gcn{i}.weight"] = uniform_init(rng, fan_in, (fan_in, arch.hidden_dim))
            params[f"gcn{i}.bias"] = uniform_init(rng, fan_in, (arch.hidden_dim,))
            fan_in = arch.hidden_dim
        params["actor.weight"] = uniform_init(rng, arch.embed_dim, (arch.embed_dim, arch.action_dim))
        params["actor.bias"] = uniform_init(rng, arch.embed_dim, (arch.action_dim,))
        params["critic.weight"] = uniform_init(rng, arch.embed_dim, (arch.embed_dim, 1))
        params["critic.bias"] = uniform_init(rng, arch.embed_dim, (1,))
        params["log_std"] = np.full(arch.action_dim, LOG_STD_INIT)
        self.params = params

    @property
    def log_std(self) -> np.ndarray:
        return self.params["log_std"]

    def _gcn(self, i: int) -> GcnLayer:
        return GcnLayer(self.params[f"gcn{i}.weight"], self.params[f"gcn{i}.bias"], "tanh")

    def _head(self, name: str) -> Linear:
        return Linear(self.params[f"{name}.weight"], self.params[f"{name}.bias"])

    def forward(self, graph: StateGraph) -> PolicyOutput:
        x = np.asarray(graph.node_features, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.arch.obs_dim:
            raise DimensionError(f"policy expects {self.arch.obs_dim} node features, got shape {x.shape}")
        adj = normalized_adjacency(x.shape[0], graph.edges)
        layer_caches: List[Dict[str, np.ndarray]] = []
        h = x
        for i in range(self.arch.gcn_layers):
            h, layer_cache = self._gcn(i).forward(adj, h)
            layer_caches.append(layer_cache)
        pooled = h.mean(axis=0)
        embedding = np.concatenate([pooled, [graph.budget_feature]]) if self.arch.aux_dim else pooled
        mean = np.tanh(self._head("actor").forward(embedding))
        value = float(self._head("critic").forward(embedding)[0])
        cache = {
            "version": self.version,
            "adj": adj,
            "layers": layer_caches,
            "num_nodes": x.shape[0],
            "embedding": embedding,
            "mean": mean,
        }
        return PolicyOutput(action_mean=mean, value=value, cache=cache)

    def backward(self, cache: Dict[str, Any], grad_outputs: Dict[str, Any]) -> Dict[str, np.ndarray]:
        """
        Parameter gradients of a scalar loss given its gradients w.r.t. the outputs

        Args:
            cache: Cache from forward() on the current parameters
            grad_outputs: Any of "action_mean" (vector), "value" (scalar), "log_std" (vector)

        Returns:
            Gradient arrays keyed like self.params
        """
        if cache.get("version") != self.version:
            raise StaleCacheError(f"cache from parameter version {cache.get('version')}, net is at {self.version}")
        grads = {name: np.zeros_like(value) for name, value in self.params.items()}
        g_mean = np.asarray(grad_outputs.get("action_mean", np.zeros(self.arch.action_dim)), dtype=np.float64)
        g_value = np.array([float(grad_outputs.get("value", 0.0))])
        if "log_std" in grad_outputs:
            grads["log_std"] = np.asarray(grad_outputs["log_std"], dtype=np.float64).copy()

        embedding = cache["embedding"]
        g_pre = g_mean * (1.0 - cache["mean"] ** 2)
        g_emb_actor, grads["actor.weight"], grads["actor.bias"] = self._head("actor").backward(embedding, g_pre)
        g_emb_critic, grads["critic.weight"], grads["critic.bias"] = self._head("critic").backward(embedding, g_value)
        g_pooled = (g_emb_actor + g_emb_critic)[: self.arch.hidden_dim]

        n = cache["num_nodes"]
        g_h = np.tile(g_pooled / n, (n, 1))
        for i in reversed(range(self.arch.gcn_layers)):
            g_h, grads[f"gcn{i}.weight"], grads[f"gcn{i}.bias"] = self._gcn(i).backward(cache["adj"], cache["layers"][i], g_h)
        return grads

    def clamp_log_std(self) -> None:
        np.clip(self.params["log_std"], LOG_STD_MIN, LOG_STD_MAX, out=self.params["log_std"])

    def mark_updated(self) -> None:
        """Invalidate caches after in-place parameter changes"""
        self.version += 1

    def num_parameters(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: value.copy() for name, value in self.params.items()}

    def load_state_dict(self, params: Dict[str, np.ndarray], strict: bool = True) -> None:
        missing = set(self.params) - set(params)
        unexpected = set(params) - set(self.params)
        if strict and (missing or unexpected):
            raise DimensionError(f"parameter names differ: missing {sorted(missing)}, unexpected {sorted(unexpected)}")
        for name, value in params.items():
            if name not in self.params:
                continue
            value = np.asarray(value, dtype=np.float64)
            if value.shape != self.params[name].shape:
                raise DimensionError(f"{name}: expected shape {self.params[name].shape}, got {value.shape}")
            self.params[name] = value.copy()
        self.mark_updated()

    def act(self, graph: StateGraph, rng: Optional[np.random.Generator] = None) -> Dict[str, Any]:
        """
        Sample (or, without rng, take the mean) action for one graph

        The log-probability is measured before clamping into [-1, 1].
        """
        out = self.forward(graph)
        if rng is None:
            raw = out.action_mean.copy()
        else:
            raw = out.action_mean + np.exp(self.log_std) * rng.standard_normal(self.arch.action_dim)
        return {
            "raw_action": raw,
            "action": np.clip(raw, -1.0, 1.0),
            "log_prob": gaussian_log_prob(raw, out.action_mean, self.log_std),
            "value": out.value,
        }
