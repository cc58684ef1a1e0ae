"""
Configuration management
"""

from .settings import Settings
from .experiment import ExperimentConfig, PpoConfig

__all__ = ["Settings", "ExperimentConfig", "PpoConfig"]
