"""
Attach reference and ideal points to instance files
"""

import argparse
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Tuple

from tqdm import tqdm

from config import ExperimentConfig
from errors import InstanceError
from moea import make_algorithm
from problems import ObjectiveSet, load_instance, write_meta
from rl import bootstrap_instance_meta
from .base import EXPERIMENT_FLAGS, Command, RunContext, add_experiment_arguments, collect_instance_paths, experiment_overrides, resolve_config

logger = logging.getLogger(__name__)


def bootstrap_file(path: str, config_data: Dict[str, Any], force: bool) -> Tuple[str, str]:
    """
    Bootstrap one instance file in place

    Returns:
        (path, "written" | "skipped")
    """
    config = ExperimentConfig.from_dict(config_data)
    try:
        record = load_instance(path)
    except InstanceError:
        if not force:
            raise
        record = load_instance(path, ignore_meta=True)
    if record.meta is not None and not force:
        if record.meta.profile and record.meta.profile != config.profile:
            raise InstanceError(f"{path}: meta was bootstrapped for {record.meta.profile}; pass --force to redo it for {config.profile}")
        return path, "skipped"
    algorithm = make_algorithm(config.algorithm, record.instance, ObjectiveSet.parse(config.objective_set), config.population_size)
    meta = bootstrap_instance_meta(algorithm, config.generations, seed=config.seed, profile=config.profile)
    write_meta(path, meta)
    return path, "written"


class BootstrapCommand(Command):
    """Run the extended static-parameter search on each instance and store its meta"""

    @property
    def name(self) -> str:
        return "bootstrap"

    @property
    def description(self) -> str:
        return "Bootstrap reference/ideal points for instance files"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)
        parser.add_argument("--force", action="store_true", help="Recompute existing or unreadable meta")

    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        config = resolve_config(ctx, experiment_overrides(args, EXPERIMENT_FLAGS))
        paths = [str(p) for p in collect_instance_paths(config.instance_dirs, split=None)]
        if not paths:
            raise InstanceError(f"no instance files found in {config.instance_dirs}")
        self.logger.info(f"Bootstrapping {len(paths)} instance(s) for {config.profile} with {ctx.threads} worker(s)")

        data = config.to_dict()
        results: List[Tuple[str, str]] = []
        with tqdm(total=len(paths), desc="bootstrap", disable=not ctx.progress) as bar:
            if ctx.threads > 1:
                with ProcessPoolExecutor(max_workers=ctx.threads) as pool:
                    for result in pool.map(bootstrap_file, paths, [data] * len(paths), [args.force] * len(paths)):
                        results.append(result)
                        bar.update(1)
            else:
                for path in paths:
                    results.append(bootstrap_file(path, data, args.force))
                    bar.update(1)

        skipped = [p for p, status in results if status == "skipped"]
        for path in skipped:
            self.logger.info(f"Skipped {Path(path).name}: already bootstrapped (use --force to redo)")
        return {"profile": config.profile, "written": len(results) - len(skipped), "skipped": len(skipped)}
