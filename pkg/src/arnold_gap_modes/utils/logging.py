"""Logging configuration for the gap-mode toolkit.

Package loggers write to stdout (and optionally a file) so that stderr stays
reserved for the machine-readable error records of the command line.
"""

import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Final

PACKAGE_LOGGER: Final = "arnold_gap_modes"
WARNINGS_LOGGER: Final = "py.warnings"
DEFAULT_FORMAT: Final = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _handlers(level: int, format_string: str, log_file: str | Path | None) -> list[logging.Handler]:
    formatter = logging.Formatter(format_string)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))
    for handler in handlers:
        handler.setLevel(level)
        handler.setFormatter(formatter)
    return handlers


def _reset(logger: logging.Logger, handlers: list[logging.Handler], level: int) -> None:
    logger.setLevel(level)
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()
    for handler in handlers:
        logger.addHandler(handler)
    logger.propagate = False


def setup_logging(
    level: str = "INFO",
    log_file: str | Path | None = None,
    format_string: str | None = None,
    capture_warnings: bool = True,
) -> None:
    """Set up logging configuration.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path to log file
        format_string: Optional custom format string
        capture_warnings: Route ``warnings`` (numpy, scipy) into the log
    """
    if format_string is None:
        format_string = DEFAULT_FORMAT

    # Remove any existing handlers
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(
        level=numeric_level, format=format_string, datefmt="%Y-%m-%d %H:%M:%S"
    )

    handlers = _handlers(numeric_level, format_string, log_file)
    _reset(logging.getLogger(PACKAGE_LOGGER), handlers, numeric_level)

    logging.captureWarnings(capture_warnings)
    if capture_warnings:
        _reset(logging.getLogger(WARNINGS_LOGGER), handlers, logging.WARNING)


@contextmanager
def log_duration(logger: logging.Logger, what: str) -> Iterator[None]:
    """Log how long the enclosed block took, at INFO level."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.info(f"{what} took {time.perf_counter() - start:.2f} s")
