"""Command-line entry point of the embedding lab."""

import argparse
import importlib
import logging
import sys
from pathlib import Path
from types import ModuleType
from typing import List, Optional

from src.commands import COMMANDS
from src.commands.common import CommandContext, RunConfig, build_report, write_report
from src.config.config_loader import parse_override
from src.config.settings import NumericsConfig, load_numerics
from src.utils.exceptions import AcceptanceError, CommandError, EmbeddingLabError
from src.utils.logger import set_level, setup_logger, share_handlers

EXIT_OK = 0
EXIT_SPEC_ERROR = 2
EXIT_ACCEPTANCE = 3

# Setup logging with file rotation
log_dir = Path('logs')
log_dir.mkdir(exist_ok=True)
logger = setup_logger('embedding_lab', log_file=log_dir / 'embedding_lab.log', stream=sys.stderr)
# Library modules log under 'src.*'; route them to the same console and file.
package_logger = share_handlers(logger, 'src')


def get_command(module_path: str) -> ModuleType:
    """
    Dynamically load a command module.

    Args:
        module_path: Module path of the command (e.g., 'src.commands.norm')

    Returns:
        Module with `add_arguments` and `run`

    Raises:
        CommandError: If the module cannot be loaded or lacks the command interface
    """
    try:
        logger.debug(f"Loading command: {module_path}")
        module = importlib.import_module(module_path)
    except ImportError as e:
        logger.error(f"Failed to import command {module_path}: {e}")
        raise CommandError(f"Command {module_path} not found") from e
    for name in ('add_arguments', 'run'):
        if not hasattr(module, name):
            raise CommandError(f"Command module {module_path} has no '{name}' function")
    return module


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Rearrangement-invariant norms, Sobolev targets and numerical verification',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument(
        '--config',
        type=str,
        help='Numerics YAML layered over src/config/numerics.yaml'
    )
    parser.add_argument(
        '--tol',
        action='append',
        metavar='SECTION.KEY=VALUE',
        help='Override one numerical setting (repeatable)'
    )
    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default='INFO',
        help='Logging level (default: INFO)'
    )
    parser.add_argument('--output', type=str, help='JSON report path (default: stdout)')
    parser.add_argument('--csv', type=str, help='CSV table path for commands that write tables')

    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, module_path in COMMANDS.items():
        module = get_command(module_path)
        subparser = subparsers.add_parser(name, help=(module.__doc__ or '').strip().splitlines()[0])
        module.add_arguments(subparser)
        subparser.set_defaults(handler=module_path)
    return parser


def resolve_numerics(config: RunConfig) -> NumericsConfig:
    """Bundled settings, then --config, then each --tol override in order."""
    numerics = load_numerics(Path(config.config_file) if config.config_file else None)
    for override in config.overrides:
        numerics = numerics.with_overrides(parse_override(override))
    return numerics


def execute(args: argparse.Namespace) -> dict:
    """Validate the run, dispatch to the command and build its report."""
    config = RunConfig.from_args(args)
    context = CommandContext(resolve_numerics(config))
    command = get_command(args.handler)
    logger.info(f"Running {config.subcommand}")
    try:
        with context.metrics.timed(config.subcommand):
            result = command.run(config, context)
    finally:
        summary = context.metrics.get_summary()
        logger.info(f"Run summary: {summary}")
    report = build_report(config, result, context.ledger)
    write_report(report, config.output)
    return report


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point of the embedding lab."""
    try:
        parser = build_parser()
    except CommandError as e:
        logger.error(f"Command setup failed: {e}")
        sys.exit(EXIT_SPEC_ERROR)
    args = parser.parse_args(argv)

    level = getattr(logging, args.log_level)
    set_level(logger, level)
    package_logger.setLevel(level)

    try:
        execute(args)
    except AcceptanceError as e:
        logger.error(f"Acceptance check failed: {e}")
        sys.exit(EXIT_ACCEPTANCE)
    except EmbeddingLabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.exit(EXIT_SPEC_ERROR)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(1)
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        sys.exit(1)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
