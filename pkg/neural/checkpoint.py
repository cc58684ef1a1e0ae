"""
Self-describing JSON checkpoints

Layout:
    {"format": "gsmodac-policy", "version": 1,
     "architecture": {obs_dim, action_dim, gcn_layers, hidden_dim, aux_dim},
     "params": {name: {"shape": [...], "data": [flat row-major floats]}},
     "optimizer": {lr, t, m: {...}, v: {...}} | absent,
     "trainer": {...} | absent}

Floats are written with repr precision, so a save/load round trip is bit-exact.
"""

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from errors import CheckpointError
from .optim import Adam
from .policy import Architecture, PolicyNet

FORMAT = "gsmodac-policy"
VERSION = 1

logger = logging.getLogger(__name__)


def _encode_arrays(arrays: Dict[str, np.ndarray]) -> Dict[str, Any]:
    return {name: {"shape": list(a.shape), "data": a.reshape(-1).tolist()} for name, a in arrays.items()}


def _decode_arrays(blob: Dict[str, Any]) -> Dict[str, np.ndarray]:
    arrays = {}
    for name, entry in blob.items():
        data = np.asarray(entry["data"], dtype=np.float64)
        shape = tuple(entry["shape"])
        if data.size != int(np.prod(shape, dtype=np.int64)):
            raise CheckpointError(f"{name}: {data.size} values do not fill shape {shape}")
        arrays[name] = data.reshape(shape)
    return arrays


@dataclass
class Checkpoint:
    net: PolicyNet
    optimizer_state: Optional[Dict[str, Any]] = None
    trainer_state: Optional[Dict[str, Any]] = None

    def restore_optimizer(self, optimizer: Adam) -> None:
        if self.optimizer_state is not None:
            optimizer.load_state_dict(self.optimizer_state)


def save_checkpoint(
    net: PolicyNet,
    path: Union[str, Path],
    optimizer: Optional[Adam] = None,
    trainer_state: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write atomically through a temporary sibling file"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload: Dict[str, Any] = {
        "format": FORMAT,
        "version": VERSION,
        "architecture": net.arch.to_dict(),
        "params": _encode_arrays(net.params),
    }
    if optimizer is not None:
        state = optimizer.state_dict()
        payload["optimizer"] = {"lr": state["lr"], "t": state["t"], "m": _encode_arrays(state["m"]), "v": _encode_arrays(state["v"])}
    if trainer_state is not None:
        payload["trainer"] = trainer_state
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload) + "\n", encoding="utf-8")
    os.replace(tmp, path)
    logger.debug(f"Saved checkpoint to {path}")
    return path


def load_checkpoint(path: Union[str, Path], action_dim: Optional[int] = None, obs_dim: Optional[int] = None) -> Checkpoint:
    """
    Args:
        path: Checkpoint file
        action_dim: Expected action dimension, checked when given
        obs_dim: Expected node feature width, checked when given

    Returns:
        Checkpoint with a fully built PolicyNet
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CheckpointError(f"checkpoint not found: {path}")
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CheckpointError(f"{path} is not a readable checkpoint ({e})")
    if not isinstance(payload, dict) or payload.get("format") != FORMAT:
        raise CheckpointError(f"{path} is not a {FORMAT} file")
    if payload.get("version") != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {payload.get('version')}, expected {VERSION}")
    try:
        arch = Architecture(**payload["architecture"])
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"invalid architecture block: {e}")
    if action_dim is not None and arch.action_dim != action_dim:
        raise CheckpointError(f"checkpoint action_dim {arch.action_dim} does not match the target algorithm ({action_dim})")
    if obs_dim is not None and arch.obs_dim != obs_dim:
        raise CheckpointError(f"checkpoint obs_dim {arch.obs_dim} does not match the objective count ({obs_dim})")

    net = PolicyNet(arch)
    try:
        net.load_state_dict(_decode_arrays(payload["params"]))
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"invalid parameter block: {e}")

    optimizer_state = None
    if "optimizer" in payload:
        try:
            optimizer_state = _decode_optimizer(payload["optimizer"], net)
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise CheckpointError(f"invalid optimizer block: {e}")
    trainer_state = payload.get("trainer")
    if trainer_state is not None and not isinstance(trainer_state, dict):
        raise CheckpointError("invalid trainer block: expected an object")
    return Checkpoint(net=net, optimizer_state=optimizer_state, trainer_state=trainer_state)


def _decode_optimizer(blob: Dict[str, Any], net: PolicyNet) -> Dict[str, Any]:
    """Adam moments must cover exactly the net's parameters, shape for shape"""
    state = {"lr": float(blob["lr"]), "t": int(blob["t"]), "m": _decode_arrays(blob["m"]), "v": _decode_arrays(blob["v"])}
    for moment in ("m", "v"):
        arrays = state[moment]
        if set(arrays) != set(net.params):
            raise ValueError(f"{moment} does not cover the policy parameters")
        for name, value in arrays.items():
            if value.shape != net.params[name].shape:
                raise ValueError(f"{moment}[{name}] has shape {value.shape}, expected {net.params[name].shape}")
    return state
