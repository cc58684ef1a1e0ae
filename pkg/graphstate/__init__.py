"""
Search state to graph conversion
"""

from .graph import StateGraph, build_state_graph, front_edges
from .normalization import NormalizationContext, normalize_objectives

__all__ = ["StateGraph", "build_state_graph", "front_edges", "NormalizationContext", "normalize_objectives"]
