"""
Dense graph convolution and linear layers with hand-written gradients
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from errors import DimensionError

ACTIVATIONS = ("tanh", "relu", "identity")


def normalized_adjacency(num_nodes: int, edges: np.ndarray) -> np.ndarray:
    """
    Symmetrically normalized adjacency with self-loops: D^-1/2 (A + I) D^-1/2

    Args:
        num_nodes: Node count
        edges: (E, 2) undirected index pairs without self-loops

    Returns:
        Dense (num_nodes, num_nodes) float64 matrix
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= num_nodes):
        raise DimensionError(f"edge index out of range for {num_nodes} nodes")
    adj = np.eye(num_nodes, dtype=np.float64)
    adj[edges[:, 0], edges[:, 1]] = 1.0
    adj[edges[:, 1], edges[:, 0]] = 1.0
    inv_sqrt = 1.0 / np.sqrt(adj.sum(axis=1))
    return adj * inv_sqrt[:, None] * inv_sqrt[None, :]


def activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "tanh":
        return np.tanh(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "identity":
        return z
    raise ValueError(f"unknown activation {name!r}")


def activation_grad(name: str, z: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Elementwise derivative given pre-activation z and output out"""
    if name == "tanh":
        return 1.0 - out * out
    if name == "relu":
        return (z > 0.0).astype(np.float64)
    return np.ones_like(z)


def uniform_init(rng: np.random.Generator, fan_in: int, shape: Tuple[int, ...]) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


@dataclass
class GcnLayer:
    weight: np.ndarray
    bias: np.ndarray
    activation: str = "tanh"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}, got {self.activation!r}")
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[1],):
            raise DimensionError(f"weight {self.weight.shape} and bias {self.bias.shape} do not match")

    def forward(self, adj: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
        if x.shape[1] != self.weight.shape[0]:
            raise DimensionError(f"layer expects {self.weight.shape[0]} input features, got {x.shape[1]}")
        agg = adj @ x
        z = agg @ self.weight + self.bias
        out = activate(self.activation, z)
        return out, {"agg": agg, "z": z, "out": out}

    def backward(self, adj: np.ndarray, cache: Dict[str, np.ndarray], grad_out: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns (grad_input, grad_weight, grad_bias)"""
        grad_z = grad_out * activation_grad(self.activation, cache["z"], cache["out"])
        grad_weight = cache["agg"].T @ grad_z
        grad_bias = grad_z.sum(axis=0)
        grad_input = adj.T @ (grad_z @ self.weight.T)
        return grad_input, grad_weight, grad_bias


def gcn_forward(layer: GcnLayer, node_features: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """activation(Â X W + b) for one layer"""
    x = np.asarray(node_features, dtype=np.float64)
    out, _ = layer.forward(normalized_adjacency(x.shape[0], edges), x)
    return out


@dataclass
class Linear:
    weight: np.ndarray
    bias: np.ndarray

    def forward(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weight + self.bias

    def backward(self, x: np.ndarray, grad_out: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns (grad_input, grad_weight, grad_bias) for a single input vector"""
        return self.weight @ grad_out, np.outer(x, grad_out), grad_out.copy()
