"""
Per-stage timing of policy-driven episodes
"""

import argparse
import time
from typing import Any, Dict

from moea import make_algorithm
from neural import load_checkpoint
from problems import ObjectiveSet, load_instance
from rl import EpisodeEnv, PolicyController, StaticController, run_episode
from utils import StageTimer, derive_seed
from .base import EXPERIMENT_FLAGS, Command, RunContext, add_experiment_arguments, experiment_overrides, resolve_config


class ProfileCommand(Command):
    @property
    def name(self) -> str:
        return "profile"

    @property
    def description(self) -> str:
        return "Time state extraction, inference, search and hypervolume stages"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)
        parser.add_argument("--checkpoint", required=True, help="Checkpoint file or 'static'")
        parser.add_argument("--instance", required=True, help="Bootstrapped instance file")
        parser.add_argument("--episodes", type=int, default=1)

    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        config = resolve_config(ctx, experiment_overrides(args, EXPERIMENT_FLAGS))
        timer = StageTimer()
        started = time.perf_counter()
        with timer.stage("setup"):
            record = load_instance(args.instance)
            algorithm = make_algorithm(config.algorithm, record.instance, ObjectiveSet.parse(config.objective_set), config.population_size)
            if args.checkpoint == "static":
                controller = StaticController()
            else:
                net = load_checkpoint(args.checkpoint, algorithm.param_space.dim, algorithm.num_objectives).net
                controller = PolicyController(net, "policy")
            env = EpisodeEnv(algorithm, record.meta, config.generations, timer=timer, auto_bootstrap=True, name=record.path.name)

        for episode in range(args.episodes):
            run_episode(env, derive_seed(config.seed, episode), controller)
        wall_clock = time.perf_counter() - started

        stages = timer.get_usage_stats()
        episodes = max(args.episodes, 1)
        report = {
            "instance": str(args.instance),
            "episodes": args.episodes,
            "generations": config.generations,
            "wall_clock": wall_clock,
            "per_episode": {name: stats["seconds"] / episodes for name, stats in stages.items()},
            "stages": stages,
        }
        self.logger.info(f"Profiled {args.episodes} episode(s) in {wall_clock:.2f}s")
        return report
