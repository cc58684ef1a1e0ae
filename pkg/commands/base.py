"""
Base command interface and shared helpers for the CLI subcommands
"""

import argparse
import json
import logging
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from config import ExperimentConfig, Settings
from errors import ConfigError
from problems import MANIFEST_NAME, split_paths


@dataclass
class RunContext:
    """Process-wide values every command receives"""

    settings: Settings
    seed: int
    threads: int
    config_path: Optional[str] = None
    quiet: bool = False

    @property
    def progress(self) -> bool:
        return not self.quiet and sys.stderr.isatty()


class Command(ABC):
    """Abstract base class for CLI subcommands"""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def name(self) -> str:
        """Subcommand name"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """One-line help text"""
        pass

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        pass

    @abstractmethod
    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        """
        Run the subcommand

        Args:
            args: Parsed command-line arguments
            ctx: Global settings, seed and thread count

        Returns:
            JSON-ready summary printed by the entry point
        """
        pass


def add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags that override ExperimentConfig fields"""
    group = parser.add_argument_group("experiment")
    group.add_argument("--problem", choices=["fjsp", "cvrp"])
    group.add_argument("--objective-set", dest="objective_set", choices=["bi", "tri", "penta"])
    group.add_argument("--algorithm", choices=["nsga2", "mopso"])
    group.add_argument("--population", dest="population_size", type=int)
    group.add_argument("--generations", type=int)
    group.add_argument("--instances", dest="instance_dirs", nargs="+", help="Generated instance directories")


def resolve_config(ctx: RunContext, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Build the experiment config: CLI > --config file > environment > defaults

    Returns:
        Validated ExperimentConfig
    """
    data = ExperimentConfig().to_dict()
    data["seed"] = ctx.settings.master_seed
    if ctx.config_path:
        try:
            file_data = json.loads(Path(ctx.config_path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config: file not found: {ctx.config_path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: {ctx.config_path} is not valid JSON ({e})")
        if not isinstance(file_data, dict):
            raise ConfigError("config: top level must be a JSON object")
        file_ppo = file_data.get("ppo") or {}
        if not isinstance(file_ppo, dict):
            raise ConfigError(f"ppo: expected an object, got {type(file_ppo).__name__}")
        ppo = dict(data["ppo"])
        ppo.update(file_ppo)
        data.update(file_data)
        data["ppo"] = ppo
    config = ExperimentConfig.from_dict(data)
    merged = dict(overrides or {})
    merged["seed"] = ctx.seed
    return config.with_overrides(merged).validate()


def experiment_overrides(args: argparse.Namespace, names: Iterable[str]) -> Dict[str, Any]:
    return {name: getattr(args, name, None) for name in names}


EXPERIMENT_FLAGS = ("problem", "objective_set", "algorithm", "population_size", "generations", "instance_dirs")


def collect_instance_paths(sources: Iterable[str], split: Optional[str]) -> List[Path]:
    """
    Expand directories (via their manifest split, or every *.json) and plain files

    Args:
        sources: Directories or instance files
        split: "train" or "test" to read a manifest split; None for every instance file
    """
    paths: List[Path] = []
    for source in sources:
        source_path = Path(source)
        if source_path.is_dir():
            if split is not None and (source_path / MANIFEST_NAME).exists():
                paths.extend(split_paths(source_path, split))
            else:
                paths.extend(sorted(p for p in source_path.glob("*.json") if p.name != MANIFEST_NAME))
        else:
            paths.append(source_path)
    return paths
