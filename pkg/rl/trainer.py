"""
Epoch loop: rollouts on a pool of bootstrapped instances, PPO updates, logs and checkpoints
"""

import json
import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from tqdm import tqdm

from config import ExperimentConfig
from errors import CheckpointError, ConfigError, InstanceError
from moea import make_algorithm
from neural import Adam, Architecture, PolicyNet, load_checkpoint, save_checkpoint
from problems import InstanceFile, ObjectiveSet
from utils import StageTimer, derive_seed, make_rng
from .env import EpisodeEnv
from .ppo import ppo_update
from .rollout import RolloutWorker, collect_rollouts

NET_STREAM = 7
UPDATE_STREAM = 1_000_003
LOG_NAME = "train_log.jsonl"
LATEST_NAME = "policy.json"


class Trainer:
    """
    PPO trainer for a policy that configures a target algorithm per generation

    Each epoch restarts every worker on an episode seeded by (seed, epoch,
    worker), so a run resumed from an epoch checkpoint replays exactly.
    """

    def __init__(self, config: ExperimentConfig, pool: List[InstanceFile], run_dir: Union[str, Path], progress: bool = True):
        """
        Args:
            config: Validated experiment configuration
            pool: Bootstrapped training instances
            run_dir: Directory receiving checkpoints and the training log
            progress: Show a tqdm bar over epochs
        """
        self.logger = logging.getLogger(self.__class__.__name__)
        self.config = config.validate()
        if config.generations < 1:
            raise ConfigError("generations: training needs at least one generation per episode")
        if not pool:
            raise InstanceError("training pool is empty")
        for record in pool:
            if record.meta is None:
                raise InstanceError(f"{record.path}: not bootstrapped; run bootstrap first")
            if record.meta.profile and record.meta.profile != config.profile:
                raise InstanceError(f"{record.path}: meta was bootstrapped for {record.meta.profile}, not {config.profile}")
        self.pool = pool
        self.run_dir = Path(run_dir)
        self.progress = progress
        self.objective_set = ObjectiveSet.parse(config.objective_set)
        self.timer = StageTimer()

        probe = self._algorithm(pool[0])
        self.arch = Architecture(
            obs_dim=probe.num_objectives,
            action_dim=probe.param_space.dim,
            gcn_layers=config.gcn_layers,
            hidden_dim=config.hidden_dim,
            aux_dim=1 if config.budget_feature else 0,
        )
        self.net = PolicyNet(self.arch, seed=derive_seed(config.seed, NET_STREAM))
        self.optimizer = Adam(self.net.params, lr=config.ppo.learning_rate)
        self.epoch = 0
        self.workers = [RolloutWorker(i, self.make_env) for i in range(config.ppo.num_parallel_envs)]

    def _algorithm(self, record: InstanceFile):
        return make_algorithm(
            self.config.algorithm,
            record.instance,
            self.objective_set,
            self.config.population_size,
        )

    def make_env(self, rng: np.random.Generator) -> EpisodeEnv:
        """Environment on an instance drawn uniformly from the pool"""
        record = self.pool[int(rng.integers(len(self.pool)))]
        name = record.path.name if record.path is not None else ""
        return EpisodeEnv(self._algorithm(record), record.meta, self.config.generations, timer=self.timer, name=name)

    def trainer_state(self) -> Dict[str, Any]:
        return {"epoch": self.epoch, "config": self.config.to_dict()}

    def resume(self, path: Union[str, Path]) -> None:
        """Continue from a checkpoint written by this trainer"""
        checkpoint = load_checkpoint(path, action_dim=self.arch.action_dim, obs_dim=self.arch.obs_dim)
        if checkpoint.net.arch != self.arch:
            raise CheckpointError(f"checkpoint architecture {checkpoint.net.arch.to_dict()} differs from {self.arch.to_dict()}")
        if not checkpoint.trainer_state or "epoch" not in checkpoint.trainer_state:
            raise CheckpointError(f"{path} has no trainer state to resume from")
        self.net = checkpoint.net
        self.optimizer = Adam(self.net.params, lr=self.config.ppo.learning_rate)
        checkpoint.restore_optimizer(self.optimizer)
        self.epoch = int(checkpoint.trainer_state["epoch"])
        self.logger.info(f"Resumed from {path} at epoch {self.epoch}")

    def checkpoint_path(self, epoch: int) -> Path:
        return self.run_dir / "checkpoints" / f"epoch_{epoch:05d}.json"

    def save(self) -> Path:
        path = save_checkpoint(self.net, self.checkpoint_path(self.epoch), self.optimizer, self.trainer_state())
        save_checkpoint(self.net, self.run_dir / LATEST_NAME, self.optimizer, self.trainer_state())
        return path

    def run_epoch(self) -> Dict[str, Any]:
        started = time.perf_counter()
        for worker in self.workers:
            worker.begin_epoch(derive_seed(self.config.seed, self.epoch, worker.index))
        batch = collect_rollouts(self.net, self.workers, self.config.ppo.steps_per_epoch)
        stats = ppo_update(
            self.net,
            self.optimizer,
            batch.trajectories,
            self.config.ppo,
            make_rng(self.config.seed, self.epoch, UPDATE_STREAM),
        )
        self.epoch += 1
        return {
            "epoch": self.epoch,
            "steps": batch.num_steps,
            "episodes": len(batch.episode_returns),
            "mean_return": float(np.mean(batch.episode_returns)) if batch.episode_returns else None,
            "mean_final_delta": float(np.mean(batch.final_deltas)) if batch.final_deltas else None,
            **stats,
            "wall_clock": time.perf_counter() - started,
        }

    def train(self, epochs: Optional[int] = None) -> Path:
        """
        Run up to `epochs` more epochs (default: until the configured total)

        Returns:
            Path of the last checkpoint written
        """
        end = self.config.num_epochs if epochs is None else min(self.config.num_epochs, self.epoch + epochs)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        log_path = self.run_dir / LOG_NAME
        last = None
        self.logger.info(f"Training {self.config.profile} on {len(self.pool)} instances, epochs {self.epoch}..{end}")
        bar = tqdm(total=end - self.epoch, desc="train", unit="epoch", disable=not self.progress)
        with open(log_path, "a", encoding="utf-8") as log:
            while self.epoch < end:
                record = self.run_epoch()
                log.write(json.dumps(record) + "\n")
                log.flush()
                self.logger.debug(f"Epoch {self.epoch}: return {record['mean_return']}, kl {record['approx_kl']:.4g}")
                if self.epoch % self.config.checkpoint_every == 0 or self.epoch == end:
                    last = self.save()
                bar.update(1)
        bar.close()
        if last is None:
            last = self.save()
        self.logger.info(f"Training stopped at epoch {self.epoch}; checkpoint {last}")
        return last
