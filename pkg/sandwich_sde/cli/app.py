"""
Command-line entry point.

Usage:
    sandwich-sde simulate --config configs/simulation1.toml --paths 10 --out runs/sim1
    sandwich-sde study --config configs/convergence.toml --workers 8
    sandwich-sde validate --config configs/validate.toml
    sandwich-sde estimate-holder --input runs/sim1/noise_00000.csv --order 0.65 --p 4

Exit codes: 0 success, 1 numeric or runtime failure (or a failed check), 2 usage or
configuration error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from sandwich_sde import __version__
from sandwich_sde.cli import commands
from sandwich_sde.cli.config import RunConfig, load_run_config
from sandwich_sde.common.errors import ConfigError, InvalidArgumentError, SandwichError
from sandwich_sde.common.log_config import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _seed(text: str) -> int:
    value = int(text, 0)
    if not (0 <= value < 2**64):
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sandwich-sde", description="Sandwiched SDE simulation and studies")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--log-level", help="Level for the sandwich_sde loggers (default: SANDWICH_LOG_LEVEL)")

    run_flags = argparse.ArgumentParser(add_help=False)
    run_flags.add_argument("--seed", type=_seed, help="Master seed (unsigned 64-bit)")
    run_flags.add_argument("--paths", type=int, help="Number of sample paths")
    run_flags.add_argument("--out", help="Output directory or fsspec URL")
    run_flags.add_argument("--workers", type=int, help="Worker processes")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    simulate = subparsers.add_parser("simulate", parents=[run_flags], help="Simulate scheme paths to CSV")
    simulate.add_argument("--config", required=True, help="TOML run configuration")

    study = subparsers.add_parser("study", parents=[run_flags], help="Run the configured Monte Carlo study")
    study.add_argument("--config", required=True, help="TOML run configuration")

    validate = subparsers.add_parser("validate", parents=[run_flags], help="Check the model's assumptions")
    validate.add_argument("--config", required=True, help="TOML run configuration")

    holder = subparsers.add_parser("estimate-holder", parents=[run_flags], help="Hölder constants of a path CSV")
    holder.add_argument("--config", help="TOML run configuration with a [holder] section")
    holder.add_argument("--input", "-i", help="Path CSV (t,value)")
    holder.add_argument("--order", type=float, help="Hölder order λ")
    holder.add_argument("--p", type=float, help="GRR exponent p")
    return parser


def _estimate_holder(args, config: Optional[RunConfig]) -> int:
    section = config.holder if config is not None else None
    source = args.input or (section.input if section is not None else None)
    order = args.order if args.order is not None else (section.order if section is not None else None)
    p = args.p if args.p is not None else (section.p if section is not None else 4.0)
    if source is None or order is None:
        raise ConfigError("estimate-holder needs --input and --order (or a [holder] section)")
    options = commands.resolve_options(config or RunConfig(), args.seed, args.paths, args.out, args.workers)
    commands.cmd_estimate_holder(source, order, p, options, config)
    return EXIT_OK


def dispatch(args) -> int:
    config = load_run_config(args.config) if args.config else None
    if args.command == "estimate-holder":
        return _estimate_holder(args, config)

    options = commands.resolve_options(config, args.seed, args.paths, args.out, args.workers)
    if args.command == "simulate":
        commands.cmd_simulate(config, options)
        return EXIT_OK
    if args.command == "study":
        report = commands.cmd_study(config, options)
        return EXIT_OK if report.passed else EXIT_FAILURE
    if args.command == "validate":
        report = commands.cmd_validate(config, options)
        return EXIT_OK if report.passed else EXIT_FAILURE
    raise ConfigError(f"unknown command '{args.command}'")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    from sandwich_sde.common.config import settings

    configure_logging(args.log_level or settings.log_level)
    try:
        return dispatch(args)
    except (ConfigError, InvalidArgumentError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except (SandwichError, OSError):
        logger.exception(f"{args.command} failed")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
