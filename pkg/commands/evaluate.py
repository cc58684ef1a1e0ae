"""
Evaluation of trained policies and the static baseline on held-out instances
"""

import argparse
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.stats import ranksums
from tqdm import tqdm

from config import ExperimentConfig
from errors import InstanceError
from moea import make_algorithm
from neural import PolicyNet, load_checkpoint
from pareto import count_non_dominated, hypervolume, igd, igd_plus, pareto_filter
from problems import ObjectiveSet, load_instance
from rl import EpisodeEnv, PolicyController, StaticController, run_episode
from utils import derive_seed, make_rng
from .base import EXPERIMENT_FLAGS, Command, RunContext, add_experiment_arguments, collect_instance_paths, experiment_overrides, resolve_config

logger = logging.getLogger(__name__)

STATIC = "static"
SAMPLING_STREAM = 17
SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class EvalJob:
    method: str
    checkpoint: Optional[str]
    instance_path: str
    instance_index: int
    run: int
    seed: int
    config_data: Dict[str, Any]
    deterministic: bool
    force: bool


@lru_cache(maxsize=16)
def _policy(path: str, action_dim: int, obs_dim: int) -> PolicyNet:
    return load_checkpoint(path, action_dim=action_dim, obs_dim=obs_dim).net


def evaluate_job(job: EvalJob) -> Dict[str, Any]:
    """One (method, instance, run) episode; returns its row plus front and trace"""
    config = ExperimentConfig.from_dict(job.config_data)
    record = load_instance(job.instance_path)
    if record.meta is None:
        raise InstanceError(f"{job.instance_path}: not bootstrapped; run bootstrap first")
    if record.meta.profile and record.meta.profile != config.profile and not job.force:
        raise InstanceError(f"{job.instance_path}: meta is for {record.meta.profile}, evaluating {config.profile} (use --force)")

    algorithm = make_algorithm(config.algorithm, record.instance, ObjectiveSet.parse(config.objective_set), config.population_size)
    env = EpisodeEnv(algorithm, record.meta, config.generations, name=Path(job.instance_path).name)
    if job.checkpoint is None:
        controller = StaticController()
    else:
        net = _policy(job.checkpoint, algorithm.param_space.dim, algorithm.num_objectives)
        rng = None if job.deterministic else make_rng(job.seed, SAMPLING_STREAM)
        controller = PolicyController(net, job.method, rng)

    result = run_episode(env, job.seed, controller)
    return {
        "row": {
            "method": job.method,
            "instance": Path(job.instance_path).stem,
            "run": job.run,
            "seed": job.seed,
            "hv": hypervolume(result.front, record.meta.reference_point),
            "nds": count_non_dominated(result.front),
            "delta_best": result.delta_best,
        },
        "front": result.front,
        "history": result.history,
    }


def method_labels(methods: Sequence[str]) -> List[str]:
    """Checkpoint stems, falling back to full paths when stems collide"""
    stems = [STATIC if m == STATIC else Path(m).stem for m in methods]
    if len(set(stems)) == len(stems):
        return stems
    return [STATIC if m == STATIC else str(Path(m).with_suffix("")) for m in methods]


def add_reference_indicators(results: List[Dict[str, Any]]) -> None:
    """IGD and IGD+ against the pooled non-dominated front of every method per instance"""
    by_instance: Dict[str, List[Dict[str, Any]]] = {}
    for item in results:
        by_instance.setdefault(item["row"]["instance"], []).append(item)
    for items in by_instance.values():
        reference = pareto_filter(np.vstack([item["front"] for item in items]))
        for item in items:
            item["row"]["igd"] = igd(item["front"], reference)
            item["row"]["igd_plus"] = igd_plus(item["front"], reference)


def aggregate(df: pd.DataFrame, methods: Sequence[str]) -> Dict[str, Any]:
    """
    Per-instance mean/max/std of HV over runs, averaged across instances

    Returns:
        Mapping method -> summary, including a rank-sum test against the static baseline
    """
    per_instance = df.groupby(["method", "instance"])["hv"].agg(
        mean="mean", max="max", std=lambda s: float(np.std(s.to_numpy(), ddof=0))
    )
    summary: Dict[str, Any] = {}
    for method in methods:
        block = per_instance.loc[method]
        rows = df[df["method"] == method]
        entry: Dict[str, Any] = {
            "hv": {stat: float(block[stat].mean()) for stat in ("mean", "max", "std")},
            "nds": float(rows["nds"].mean()),
        }
        for column in ("igd", "igd_plus"):
            if column in rows:
                entry[column] = float(rows[column].mean())
        if method != STATIC and STATIC in methods:
            baseline = df[df["method"] == STATIC]["hv"].to_numpy()
            test = ranksums(rows["hv"].to_numpy(), baseline)
            entry["vs_static"] = {
                "statistic": float(test.statistic),
                "p_value": float(test.pvalue),
                "significant": bool(test.pvalue < SIGNIFICANCE),
            }
        summary[method] = entry
    return summary


def write_traces(out: Path, results: List[Dict[str, Any]]) -> None:
    """One gnuplot-friendly file of (generation, hv_best) per episode"""
    trace_dir = out / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    for item in results:
        row = item["row"]
        name = f"{row['method'].replace('/', '_')}__{row['instance']}__run{row['run']:02d}.dat"
        lines = ["# generation hv_best"] + [f"{g} {hv!r}" for g, hv in enumerate(item["history"])]
        (trace_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")


class EvaluateCommand(Command):
    """Run every method on every test instance several times with shared seeds and reference points"""

    @property
    def name(self) -> str:
        return "evaluate"

    @property
    def description(self) -> str:
        return "Evaluate checkpoints and the static baseline"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)
        parser.add_argument("--checkpoint", nargs="+", required=True, help="Checkpoint files and/or 'static'")
        parser.add_argument("--runs", type=int, default=10)
        parser.add_argument("--out", required=True, help="Output directory for results.csv and aggregate.json")
        parser.add_argument("--split", choices=["train", "test"], default="test")
        parser.add_argument("--igd", action="store_true", help="Add IGD/IGD+ against the pooled front")
        parser.add_argument("--traces", action="store_true", help="Write per-episode convergence traces")
        parser.add_argument("--sample", action="store_true", help="Sample policy actions instead of using the mean")
        parser.add_argument("--force", action="store_true", help="Accept meta bootstrapped for another profile")

    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        config = resolve_config(ctx, experiment_overrides(args, EXPERIMENT_FLAGS))
        if args.runs < 1:
            raise InstanceError("runs must be positive")
        paths = collect_instance_paths(config.instance_dirs, split=args.split)
        if not paths:
            raise InstanceError(f"no {args.split} instances in {config.instance_dirs}")
        labels = method_labels(args.checkpoint)
        deterministic = config.deterministic_eval and not args.sample

        jobs = [
            EvalJob(
                method=label,
                checkpoint=None if source == STATIC else source,
                instance_path=str(path),
                instance_index=i,
                run=run,
                seed=derive_seed(config.seed, i, run),
                config_data=config.to_dict(),
                deterministic=deterministic,
                force=args.force,
            )
            for i, path in enumerate(paths)
            for run in range(args.runs)
            for label, source in zip(labels, args.checkpoint)
        ]
        self.logger.info(f"Evaluating {labels} on {len(paths)} instance(s) x {args.runs} run(s)")

        results: List[Dict[str, Any]] = []
        with tqdm(total=len(jobs), desc="evaluate", disable=not ctx.progress) as bar:
            if ctx.threads > 1:
                with ProcessPoolExecutor(max_workers=ctx.threads) as pool:
                    for item in pool.map(evaluate_job, jobs):
                        results.append(item)
                        bar.update(1)
            else:
                for job in jobs:
                    results.append(evaluate_job(job))
                    bar.update(1)

        order = {label: k for k, label in enumerate(labels)}
        results.sort(key=lambda item: (item["row"]["instance"], item["row"]["run"], order[item["row"]["method"]]))
        if args.igd:
            add_reference_indicators(results)

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        df = pd.DataFrame([item["row"] for item in results])
        df.to_csv(out / "results.csv", index=False)
        summary = {
            "profile": config.profile,
            "instances": len(paths),
            "runs": args.runs,
            "methods": aggregate(df, labels),
        }
        (out / "aggregate.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if args.traces:
            write_traces(out, results)
        self.logger.info(f"Wrote {len(df)} rows to {out / 'results.csv'}")
        return {label: summary["methods"][label]["hv"] for label in labels}
