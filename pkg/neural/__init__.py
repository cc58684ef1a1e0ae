"""
Numpy GCN policy, Adam optimizer and checkpoint files
"""

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .layers import GcnLayer, Linear, gcn_forward, normalized_adjacency
from .optim import Adam, clip_grad_norm
from .policy import (
    LOG_STD_INIT,
    LOG_STD_MAX,
    LOG_STD_MIN,
    Architecture,
    PolicyNet,
    PolicyOutput,
    gaussian_entropy,
    gaussian_log_prob,
)

__all__ = [
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "GcnLayer",
    "Linear",
    "gcn_forward",
    "normalized_adjacency",
    "Adam",
    "clip_grad_norm",
    "LOG_STD_INIT",
    "LOG_STD_MAX",
    "LOG_STD_MIN",
    "Architecture",
    "PolicyNet",
    "PolicyOutput",
    "gaussian_entropy",
    "gaussian_log_prob",
]
