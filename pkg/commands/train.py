"""
Policy training
"""

import argparse
import json
from pathlib import Path
from typing import Any, Dict

from errors import InstanceError
from problems import load_instance
from rl import Trainer
from .base import EXPERIMENT_FLAGS, Command, RunContext, add_experiment_arguments, collect_instance_paths, experiment_overrides, resolve_config


class TrainCommand(Command):
    @property
    def name(self) -> str:
        return "train"

    @property
    def description(self) -> str:
        return "Train a configuration policy with PPO"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)
        parser.add_argument("--run-dir", dest="run_dir", help="Where checkpoints and the training log go")
        parser.add_argument("--total-steps", dest="total_steps", type=int)
        parser.add_argument("--checkpoint-every", dest="checkpoint_every", type=int)
        parser.add_argument("--gcn-layers", dest="gcn_layers", type=int, choices=[1, 2])
        parser.add_argument("--no-budget-feature", dest="budget_feature", action="store_const", const=False)
        parser.add_argument("--steps-per-epoch", dest="ppo.steps_per_epoch", type=int)
        parser.add_argument("--lr", dest="ppo.learning_rate", type=float)
        parser.add_argument("--envs", dest="ppo.num_parallel_envs", type=int)
        parser.add_argument("--epochs", type=int, help="Stop after this many epochs in this invocation")
        parser.add_argument("--resume", help="Checkpoint to continue from")

    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        names = EXPERIMENT_FLAGS + (
            "run_dir",
            "total_steps",
            "checkpoint_every",
            "gcn_layers",
            "budget_feature",
            "ppo.steps_per_epoch",
            "ppo.learning_rate",
            "ppo.num_parallel_envs",
        )
        config = resolve_config(ctx, experiment_overrides(args, names))
        paths = collect_instance_paths(config.instance_dirs, split="train")
        if not paths:
            raise InstanceError(f"no training instances in {config.instance_dirs}")
        pool = [load_instance(p) for p in paths]

        run_dir = Path(config.run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "config.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")

        trainer = Trainer(config, pool, run_dir, progress=ctx.progress)
        if args.resume:
            trainer.resume(args.resume)
        checkpoint = trainer.train(args.epochs)
        stats = trainer.timer.get_usage_stats()
        self.logger.info(f"Stage timing: {stats}")
        return {"checkpoint": str(checkpoint), "epoch": trainer.epoch, "architecture": trainer.arch.to_dict()}
