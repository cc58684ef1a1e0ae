"""
Experiment definition: problem, search budget, PPO hyperparameters and ablation switches
"""

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from errors import ConfigError

PROBLEMS = ("fjsp", "cvrp")
OBJECTIVE_SETS = ("bi", "tri", "penta")
ALGORITHMS = ("nsga2", "mopso")


def _matches(value: Any, expected: Any) -> bool:
    # bool is an int subclass; JSON true must not pass as a number
    if expected is bool:
        return isinstance(value, bool)
    if expected is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if expected is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if expected is str:
        return isinstance(value, str)
    if expected == List[str]:
        return isinstance(value, list) and all(isinstance(v, str) for v in value)
    return True


def _type_problems(cls, data: Dict[str, Any], prefix: str = "") -> List[str]:
    """One message per value whose JSON type does not fit the dataclass field"""
    types = {f.name: f.type for f in fields(cls)}
    found = []
    for name, value in data.items():
        expected = types.get(name)
        if not _matches(value, expected):
            wanted = "list of strings" if expected == List[str] else expected.__name__
            found.append(f"{prefix}{name}: expected {wanted}, got {type(value).__name__} {value!r}")
    return found


@dataclass
class PpoConfig:
    """PPO hyperparameters"""

    gamma: float = 0.99
    gae_lambda: float = 0.95
    clip_ratio: float = 0.2
    learning_rate: float = 3e-4
    update_epochs: int = 10
    minibatch_size: int = 64
    steps_per_epoch: int = 500
    value_coef: float = 0.5
    entropy_coef: float = 0.0
    num_parallel_envs: int = 5
    max_grad_norm: float = 0.5

    def problems(self) -> List[str]:
        """Return one message per invalid field"""
        found = []
        if not 0.0 < self.clip_ratio < 1.0:
            found.append(f"ppo.clip_ratio: must lie in (0, 1), got {self.clip_ratio}")
        if not 0.0 < self.gamma <= 1.0:
            found.append(f"ppo.gamma: must lie in (0, 1], got {self.gamma}")
        if not 0.0 < self.gae_lambda <= 1.0:
            found.append(f"ppo.gae_lambda: must lie in (0, 1], got {self.gae_lambda}")
        if self.learning_rate <= 0.0:
            found.append(f"ppo.learning_rate: must be positive, got {self.learning_rate}")
        for name in ("update_epochs", "minibatch_size", "steps_per_epoch", "num_parallel_envs"):
            if getattr(self, name) < 1:
                found.append(f"ppo.{name}: must be at least 1, got {getattr(self, name)}")
        if self.value_coef < 0.0 or self.entropy_coef < 0.0:
            found.append("ppo.value_coef/entropy_coef: must be nonnegative")
        return found


@dataclass
class ExperimentConfig:
    """Everything needed to regenerate a training or evaluation run"""

    problem: str = "fjsp"
    objective_set: str = "bi"
    algorithm: str = "nsga2"
    instance_size: str = "5j5m"
    population_size: int = 50
    generations: int = 50
    ppo: PpoConfig = field(default_factory=PpoConfig)
    total_steps: int = 50_000
    checkpoint_every: int = 10
    budget_feature: bool = True
    gcn_layers: int = 2
    hidden_dim: int = 64
    deterministic_eval: bool = True
    seed: int = 0
    instance_dirs: List[str] = field(default_factory=lambda: ["data/instances"])
    run_dir: str = "runs"

    @property
    def num_epochs(self) -> int:
        """Epoch count implied by the total step budget"""
        return max(1, math.ceil(self.total_steps / self.ppo.steps_per_epoch))

    @property
    def profile(self) -> str:
        """Tag identifying which bootstrapped instance meta this experiment needs"""
        return f"{self.algorithm}/{self.objective_set}"

    def validate(self) -> "ExperimentConfig":
        """
        Check every field and raise a single ConfigError naming all offenders

        Returns:
            self, for chaining
        """
        found = []
        if self.problem not in PROBLEMS:
            found.append(f"problem: must be one of {PROBLEMS}, got {self.problem!r}")
        if self.objective_set not in OBJECTIVE_SETS:
            found.append(f"objective_set: must be one of {OBJECTIVE_SETS}, got {self.objective_set!r}")
        elif self.problem == "cvrp" and self.objective_set != "bi":
            found.append(f"objective_set: {self.objective_set} requires problem=fjsp")
        if self.algorithm not in ALGORITHMS:
            found.append(f"algorithm: must be one of {ALGORITHMS}, got {self.algorithm!r}")
        elif self.algorithm == "mopso" and self.problem != "cvrp":
            found.append("algorithm: mopso requires problem=cvrp")
        if self.population_size < 2:
            found.append(f"population_size: must be at least 2, got {self.population_size}")
        if self.generations < 0:
            found.append(f"generations: must be nonnegative, got {self.generations}")
        if self.gcn_layers not in (1, 2):
            found.append(f"gcn_layers: must be 1 or 2, got {self.gcn_layers}")
        if self.hidden_dim < 1:
            found.append(f"hidden_dim: must be positive, got {self.hidden_dim}")
        if self.total_steps < 1:
            found.append(f"total_steps: must be positive, got {self.total_steps}")
        if self.checkpoint_every < 1:
            found.append(f"checkpoint_every: must be positive, got {self.checkpoint_every}")
        if not self.instance_dirs:
            found.append("instance_dirs: at least one directory is required")
        found.extend(self.ppo.problems())
        if found:
            raise ConfigError(found)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Build a config from a JSON-shaped dict, rejecting unknown keys and mistyped values

        Args:
            data: Mapping with ExperimentConfig field names; "ppo" may be a nested mapping

        Returns:
            ExperimentConfig (not yet validated)
        """
        if not isinstance(data, dict):
            raise ConfigError(f"config: expected a JSON object, got {type(data).__name__}")
        ppo_data = data.get("ppo") or {}
        if not isinstance(ppo_data, dict):
            raise ConfigError(f"ppo: expected an object, got {type(ppo_data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        ppo_known = {f.name for f in fields(PpoConfig)}
        unknown += sorted(f"ppo.{k}" for k in set(ppo_data) - ppo_known)
        if unknown:
            raise ConfigError([f"{name}: unknown field" for name in unknown])

        kwargs = {k: v for k, v in data.items() if k != "ppo"}
        if isinstance(kwargs.get("instance_dirs"), str):
            kwargs["instance_dirs"] = [kwargs["instance_dirs"]]
        mistyped = _type_problems(cls, kwargs) + _type_problems(PpoConfig, ppo_data, "ppo.")
        if mistyped:
            raise ConfigError(mistyped)
        return cls(ppo=PpoConfig(**ppo_data), **kwargs)

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config: file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: {path} is not valid JSON ({e})")
        return cls.from_dict(data)

    def with_overrides(self, overrides: Optional[Dict[str, Any]]) -> "ExperimentConfig":
        """Return a copy with non-None top-level or ppo.* overrides applied"""
        data = self.to_dict()
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key.startswith("ppo."):
                data["ppo"][key[4:]] = value
            else:
                data[key] = value
        return ExperimentConfig.from_dict(data)
