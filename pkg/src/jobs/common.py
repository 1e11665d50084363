"""
Shared plumbing for the jobs: argument parsing, logging setup, exit codes.
"""

import argparse
import logging
from typing import Callable, Optional, Sequence

from src.config import RunConfig
from src.errors import AepError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"


def configure_logging(level: str = "INFO"):
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)


def add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="YAML run config (defaults are bundled)")
    parser.add_argument("--output", help="Output directory (overrides paths.output)")
    parser.add_argument("--seed", type=int, help="Root seed (overrides model.seed and AEP_SEED)")
    parser.add_argument("--log-level", default="INFO")


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config)
    overrides = {}
    if getattr(args, "output", None):
        overrides["paths"] = {"output": args.output}
    if getattr(args, "seed", None) is not None:
        overrides["model"] = {"seed": args.seed}
    return config.updated(**overrides) if overrides else config


def exit_code(run: Callable[[], bool]) -> int:
    """
    0 if `run` returns True, 1 if it returns False (an in-run assertion
    failed), 2 on a package error.
    """
    try:
        return EXIT_OK if run() else EXIT_ASSERTION
    except AepError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


def job_main(
    description: str,
    run: Callable[[RunConfig, argparse.Namespace], bool],
    argv: Optional[Sequence[str]] = None,
    extra: Optional[Callable[[argparse.ArgumentParser], None]] = None,
) -> int:
    parser = argparse.ArgumentParser(description=description)
    add_common_arguments(parser)
    if extra:
        extra(parser)
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    return exit_code(lambda: run(load_config(args), args))
