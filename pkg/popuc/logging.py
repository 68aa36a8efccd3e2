"""Logging configuration for popuc using loguru.

Call `setup_logging()` once at startup (the CLI callback does this). Provides:
- Console output on stderr with configurable verbosity
- Rotating file log at ~/.popuc/logs/popuc.log

Library modules never configure sinks themselves; they only emit through
`loguru.logger`, so importing popuc as a library stays silent until the
host application adds a sink.
"""

from __future__ import annotations

import sys
from pathlib import Path

from loguru import logger

_CONSOLE_FORMAT = (
    "<level>{level:<8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - {message}"
)
_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level:<8} | {name}:{function}:{line} - {message}"


def console_level(verbose: bool = False, quiet: bool = False) -> str:
    """Map the CLI verbosity flags to a loguru level name. quiet wins over verbose."""
    if quiet:
        return "WARNING"
    if verbose:
        return "DEBUG"
    return "INFO"


def setup_logging(
    verbose: bool = False,
    quiet: bool = False,
    log_dir: Path | None = None,
    file_logging: bool = True,
) -> None:
    """Configure loguru sinks for console and file output.

    Args:
        verbose: Show DEBUG-level messages on console.
        quiet: Suppress console output below WARNING.
        log_dir: Directory for log files. Defaults to ~/.popuc/logs.
        file_logging: Set False to skip the rotating file sink entirely.
    """
    logger.remove()

    logger.add(
        sys.stderr,
        level=console_level(verbose, quiet),
        format=_CONSOLE_FORMAT,
        colorize=True,
    )

    if not file_logging:
        return

    log_path = log_dir or (Path.home() / ".popuc" / "logs")
    log_path.mkdir(parents=True, exist_ok=True)

    logger.add(
        log_path / "popuc.log",
        level="DEBUG",
        format=_FILE_FORMAT,
        rotation="10 MB",
        retention=5,
        encoding="utf-8",
        enqueue=True,
    )
