"""
JSON instance files with optional bootstrapped evaluation metadata

Layout:
    {"kind": "fjsp" | "cvrp", "seed": int, "data": {...},
     "meta": {"reference_point": [...], "ideal_point": [...], "source_seed": int,
              "hv_ideal": float, "profile": "nsga2/bi"}}

The meta section is absent until an instance has been bootstrapped.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from errors import InstanceError
from .base import ProblemInstance
from .cvrp import CvrpInstance
from .fjsp import FjspInstance

logger = logging.getLogger(__name__)

INSTANCE_TYPES = {"fjsp": FjspInstance, "cvrp": CvrpInstance}


@dataclass
class InstanceMeta:
    """Fixed evaluation reference data attached to an instance"""

    reference_point: np.ndarray
    ideal_point: np.ndarray
    source_seed: int
    hv_ideal: float = 0.0
    profile: str = ""

    def __post_init__(self):
        self.reference_point = np.asarray(self.reference_point, dtype=np.float64)
        self.ideal_point = np.asarray(self.ideal_point, dtype=np.float64)
        if self.reference_point.shape != self.ideal_point.shape:
            raise InstanceError(
                f"reference_point has {self.reference_point.size} entries, ideal_point {self.ideal_point.size}"
            )
        if np.any(self.ideal_point > self.reference_point):
            raise InstanceError("ideal_point must be component-wise <= reference_point")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reference_point": [float(v) for v in self.reference_point],
            "ideal_point": [float(v) for v in self.ideal_point],
            "source_seed": int(self.source_seed),
            "hv_ideal": float(self.hv_ideal),
            "profile": self.profile,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InstanceMeta":
        if not isinstance(data, dict):
            raise InstanceError(f"malformed meta section: expected an object, got {type(data).__name__}")
        source_seed = data.get("source_seed", 0)
        if not isinstance(source_seed, int) or isinstance(source_seed, bool):
            raise InstanceError(f"malformed meta section: source_seed must be an integer, got {source_seed!r}")
        try:
            meta = cls(
                reference_point=data["reference_point"],
                ideal_point=data["ideal_point"],
                source_seed=source_seed,
                hv_ideal=float(data.get("hv_ideal", 0.0)),
                profile=str(data.get("profile", "")),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceError(f"malformed meta section: {e}")
        if meta.reference_point.ndim != 1 or meta.reference_point.size == 0:
            raise InstanceError("malformed meta section: points must be non-empty flat lists")
        if not (np.all(np.isfinite(meta.reference_point)) and np.all(np.isfinite(meta.ideal_point)) and np.isfinite(meta.hv_ideal)):
            raise InstanceError("malformed meta section: points and hv_ideal must be finite")
        return meta


@dataclass
class InstanceFile:
    instance: ProblemInstance
    meta: Optional[InstanceMeta] = None
    path: Optional[Path] = None


def instance_payload(instance: ProblemInstance, meta: Optional[InstanceMeta] = None) -> Dict[str, Any]:
    payload = {"kind": instance.kind, "seed": int(instance.seed), "data": instance.to_dict()}
    if meta is not None:
        payload["meta"] = meta.to_dict()
    return payload


def save_instance(path: Union[str, Path], instance: ProblemInstance, meta: Optional[InstanceMeta] = None) -> Path:
    """Write an instance file; output is byte-stable for equal inputs"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_payload(instance, meta), sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_instance(path: Union[str, Path], ignore_meta: bool = False) -> InstanceFile:
    """
    Read an instance file

    Args:
        path: JSON instance file
        ignore_meta: Skip parsing the meta section (used before re-bootstrapping)

    Returns:
        InstanceFile with the parsed instance and meta (None when not bootstrapped)
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InstanceError(f"instance file not found: {path}")
    except json.JSONDecodeError as e:
        raise InstanceError(f"{path} is not valid JSON: {e}")
    if not isinstance(payload, dict):
        raise InstanceError(f"{path}: expected a JSON object, got {type(payload).__name__}")

    kind = payload.get("kind")
    if kind not in INSTANCE_TYPES:
        raise InstanceError(f"{path}: unknown instance kind {kind!r}")
    instance = INSTANCE_TYPES[kind].from_dict(payload.get("data") or {}, seed=int(payload.get("seed", 0)))
    meta = None
    if payload.get("meta") and not ignore_meta:
        meta = InstanceMeta.from_dict(payload["meta"])
    return InstanceFile(instance=instance, meta=meta, path=path)


def write_meta(path: Union[str, Path], meta: InstanceMeta) -> None:
    """Attach (or replace) the meta section of an existing instance file"""
    record = load_instance(path, ignore_meta=True)
    save_instance(path, record.instance, meta)
    logger.debug(f"Wrote meta for {path} (profile {meta.profile})")


MANIFEST_NAME = "manifest.json"


def read_manifest(directory: Union[str, Path]) -> Dict[str, Any]:
    """Manifest written by the generator: {"problem", "size", "seed", "train": [...], "test": [...]}"""
    path = Path(directory) / MANIFEST_NAME
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InstanceError(f"no {MANIFEST_NAME} in {directory}; run generate first")
    except json.JSONDecodeError as e:
        raise InstanceError(f"{path} is not valid JSON: {e}")


def split_paths(directory: Union[str, Path], split: str) -> List[Path]:
    """Instance file paths of the "train" or "test" split of a generated directory"""
    if split not in ("train", "test"):
        raise ValueError(f"split must be 'train' or 'test', got {split!r}")
    manifest = read_manifest(directory)
    return [Path(directory) / name for name in manifest.get(split, [])]
