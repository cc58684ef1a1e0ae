"""
CLI subcommands
"""

from .base import Command, RunContext, collect_instance_paths, resolve_config
from .bootstrap import BootstrapCommand
from .evaluate import EvaluateCommand
from .generate import GenerateCommand, parse_size
from .profile import ProfileCommand
from .train import TrainCommand

COMMANDS = [GenerateCommand, BootstrapCommand, TrainCommand, EvaluateCommand, ProfileCommand]

__all__ = [
    "Command",
    "RunContext",
    "collect_instance_paths",
    "resolve_config",
    "BootstrapCommand",
    "EvaluateCommand",
    "GenerateCommand",
    "parse_size",
    "ProfileCommand",
    "TrainCommand",
    "COMMANDS",
]
