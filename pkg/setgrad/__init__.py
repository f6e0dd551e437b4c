"""setgrad: gradients of locally Lipschitz functions on sets, and descent built on them."""
import argparse
import logging
from typing import Optional

from config import config

__version__ = "0.1.0"


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging once, from LOG_LEVEL/LOG_FORMAT unless ``level`` is given."""
    name = (level or config.LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, name, logging.INFO), format=config.LOG_FORMAT)


def create_parser() -> argparse.ArgumentParser:
    """Build the command-line parser with every registered subcommand."""
    from setgrad.commands import register_commands

    parser = argparse.ArgumentParser(
        prog="setgrad",
        description="Set gradients, minimal-norm elements and eps-shrinking descent.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    register_commands(subparsers)
    return parser
