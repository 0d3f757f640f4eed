"""
Main CLI Module.
Entry point for the embednum command line.
"""

import argparse
import importlib
import sys
from dataclasses import replace
from typing import List, Optional, TextIO

from embednum import __version__
from embednum.config import OUTPUT_FORMATS, Config, get_config
from embednum.services.facts import init_fact_registry
from embednum.services.propagate import LedgerContradiction
from embednum.utils.logging import get_logger, set_debug_mode

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONTRADICTION = 3

# Each module exposes setup(subparsers, parents)
COMMAND_MODULES = (
    "embednum.commands.lens",
    "embednum.commands.manifolds",
    "embednum.commands.split",
    "embednum.commands.forms",
    "embednum.commands.tables",
)


def global_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--assume-11-8", dest="assume_11_8", action="store_true",
                        help="assume the 11/8 inequality (results are tagged Assumes11_8)")
    parent.add_argument("--format", choices=OUTPUT_FORMATS, default=None,
                        help="output format (default: text)")
    parent.add_argument("--trace", action="store_true",
                        help="include derivation chains and search traces")
    parent.add_argument("--facts", metavar="PATH", default=None,
                        help="fact registry file (default: bundled data/facts.json)")
    parent.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embednum",
        description="Bounds on embedding numbers of 3-manifolds in #n S2xS2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    parents = [global_options()]
    for name in COMMAND_MODULES:
        importlib.import_module(name).setup(subparsers, parents)
    return parser


def _configure(args: argparse.Namespace) -> Config:
    config = get_config()
    overrides = {}
    if args.facts:
        overrides["facts_path"] = args.facts
    if args.format:
        overrides["output_format"] = args.format
    return replace(config, **overrides)


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse argv, run one command and print its output.

    Returns:
        0 on success, 2 on invalid input, 3 when the fact registry
        contradicts a computed bound.
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID

    config = _configure(args)
    set_debug_mode(config.debug_mode or args.verbose)
    errors = config.validate()
    if errors:
        for error in errors:
            logger.error(f"Configuration error: {error}")
            print(f"error: {error}", file=sys.stderr)
        return EXIT_INVALID

    try:
        args.registry = init_fact_registry(config.facts_path)
        output = args.handler(args, config)
    except LedgerContradiction as e:
        logger.error(f"Fact registry contradicts a computed bound at L_{e.n}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except RuntimeError as e:
        logger.error(f"Computation failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    print(output, file=stdout)
    return EXIT_OK


def run_cli():
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    run_cli()
