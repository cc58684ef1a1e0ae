"""
Scheduling and routing problem definitions
"""

from .base import ObjectiveSet, ProblemInstance
from .fjsp import FjspGenConfig, FjspInstance, ScheduledOp, decode_schedule, evaluate_fjsp, generate_fjsp
from .cvrp import CvrpGenConfig, CvrpInstance, evaluate_cvrp, generate_cvrp, route_length, split_routes
from .instance_files import (
    MANIFEST_NAME,
    InstanceFile,
    InstanceMeta,
    load_instance,
    read_manifest,
    save_instance,
    split_paths,
    write_meta,
)

__all__ = [
    "ObjectiveSet",
    "ProblemInstance",
    "FjspGenConfig",
    "FjspInstance",
    "ScheduledOp",
    "decode_schedule",
    "evaluate_fjsp",
    "generate_fjsp",
    "CvrpGenConfig",
    "CvrpInstance",
    "evaluate_cvrp",
    "generate_cvrp",
    "route_length",
    "split_routes",
    "MANIFEST_NAME",
    "InstanceFile",
    "InstanceMeta",
    "load_instance",
    "read_manifest",
    "save_instance",
    "split_paths",
    "write_meta",
]
