"""
Instance generation with a train/test manifest
"""

import argparse
import json
import math
import re
from pathlib import Path
from typing import Any, Dict, Tuple

from tqdm import tqdm

from errors import ConfigError
from problems import MANIFEST_NAME, CvrpGenConfig, generate_cvrp, generate_fjsp, save_instance
from utils import spawn_seeds
from .base import Command, RunContext

FJSP_SIZE = re.compile(r"^(\d+)j(\d+)m$")


def parse_size(problem: str, size: str) -> Tuple[int, ...]:
    """'10j5m' -> (10, 5) for FJSP; '20' -> (20,) for CVRP"""
    if problem == "fjsp":
        match = FJSP_SIZE.match(size)
        if not match:
            raise ConfigError(f"size: FJSP sizes look like 5j5m, got {size!r}")
        return int(match.group(1)), int(match.group(2))
    if not size.isdigit() or int(size) < 1:
        raise ConfigError(f"size: CVRP sizes are positive customer counts, got {size!r}")
    return (int(size),)


class GenerateCommand(Command):
    """Write seeded random instances and a manifest splitting them into train and test halves"""

    @property
    def name(self) -> str:
        return "generate"

    @property
    def description(self) -> str:
        return "Generate random FJSP or CVRP instances"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--problem", choices=["fjsp", "cvrp"], required=True)
        parser.add_argument("--size", required=True, help="5j5m style for FJSP, customer count for CVRP")
        parser.add_argument("--count", type=int, default=200)
        parser.add_argument("--out", required=True, help="Output directory")
        parser.add_argument("--distribution", choices=["uniform", "clustered"], default="uniform", help="CVRP customer layout")

    def execute(self, args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
        if args.count < 1:
            raise ConfigError(f"count: must be positive, got {args.count}")
        dims = parse_size(args.problem, args.size)
        seed = ctx.seed if ctx.seed is not None else ctx.settings.master_seed
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)

        names = []
        cvrp_cfg = CvrpGenConfig(distribution=args.distribution)
        for index, instance_seed in enumerate(tqdm(spawn_seeds(seed, args.count), desc="generate", disable=not ctx.progress)):
            if args.problem == "fjsp":
                instance = generate_fjsp(instance_seed, *dims)
            else:
                instance = generate_cvrp(instance_seed, dims[0], cvrp_cfg)
            name = f"{args.problem}_{args.size}_{index:04d}.json"
            save_instance(out / name, instance)
            names.append(name)

        n_train = math.ceil(len(names) / 2)
        manifest = {
            "problem": args.problem,
            "size": args.size,
            "seed": seed,
            "distribution": args.distribution if args.problem == "cvrp" else None,
            "train": names[:n_train],
            "test": names[n_train:],
        }
        (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        if not manifest["test"]:
            self.logger.warning(f"Only {len(names)} instance(s) generated; the test split is empty")
        self.logger.info(f"Wrote {len(names)} instances to {out} ({n_train} train / {len(names) - n_train} test)")
        return {"out": str(out), "train": len(manifest["train"]), "test": len(manifest["test"])}
