"""
Command-line interface: generate, bootstrap, train, evaluate, profile
"""

import argparse
import json
import logging
import os
import sys
from datetime import datetime
from typing import List, Optional

from dotenv import load_dotenv

from commands import COMMANDS, RunContext
from config import Settings
from errors import GsModacError


# Configure logging
def setup_logging(log_dir: str = "logs", level: str = "INFO", quiet: bool = False) -> str:
    """Setup logging configuration with file and console handlers"""
    os.makedirs(log_dir, exist_ok=True)

    # Create log filename with timestamp
    log_filename = os.path.join(log_dir, f"gsmodac_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log")

    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    file_handler = logging.FileHandler(log_filename)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(log_format))

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING if quiet else getattr(logging, level.upper(), logging.INFO))
    console_handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    # repeated main() calls in one process replace the handlers they installed
    for handler in [h for h in root_logger.handlers if getattr(h, "_gsmodac", False)]:
        root_logger.removeHandler(handler)
        handler.close()
    for handler in (file_handler, console_handler):
        handler._gsmodac = True
        root_logger.addHandler(handler)

    return log_filename


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsmodac", description="Graph-based dynamic configuration of multi-objective evolutionary search")
    parser.add_argument("--seed", type=int, default=None, help="Master seed (overrides GSMODAC_SEED and the config file)")
    parser.add_argument("--config", default=None, help="Experiment config JSON")
    parser.add_argument("--threads", type=int, default=None, help="Worker processes for bootstrap and evaluate")
    parser.add_argument("--quiet", action="store_true", help="No progress bars; warnings only on the console")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command_cls in COMMANDS:
        command = command_cls()
        sub = subparsers.add_parser(command.name, help=command.description, description=command.description)
        command.add_arguments(sub)
        sub.set_defaults(handler=command)
    return parser


def report_error(command: str, error: BaseException) -> None:
    payload = {"error": type(error).__name__, "message": str(error), "command": command}
    print(json.dumps(payload), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    load_dotenv()
    args = build_parser().parse_args(argv)

    try:
        settings = Settings.from_env()
    except ValueError as e:
        report_error(args.command, e)
        return 2

    log_file = setup_logging(settings.log_dir, settings.log_level, args.quiet)
    logger = logging.getLogger(__name__)
    logger.debug(f"Log file: {log_file}")

    ctx = RunContext(
        settings=settings,
        seed=args.seed,
        threads=args.threads if args.threads is not None else settings.threads,
        config_path=args.config,
        quiet=args.quiet,
    )
    try:
        summary = args.handler.execute(args, ctx)
    except GsModacError as e:
        logger.error(f"{args.command} failed: {e}")
        report_error(args.command, e)
        return 2
    except Exception as e:
        logger.error(f"Fatal error in {args.command}: {str(e)}", exc_info=True)
        report_error(args.command, e)
        return 1

    print(json.dumps(summary, indent=2, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
