"""
Centralized logging configuration for the toolkit.

This module provides a standardized way to get a logger instance, ensuring
that all logs produced by the engine are consistent in format. Logs go to
stderr so that they never interleave with the rendered CLI output on stdout.
"""

import logging
import sys
from typing import Optional

from src.config.settings import settings

# Define a standard logging format
LOG_FORMAT = f"%(asctime)s - {settings.PROJECT_NAME} - %(name)s - %(levelname)s - %(message)s"


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Configures and retrieves a logger instance.

    Args:
        name: The name for the logger, typically __name__.
        level: The logging level to set. Defaults to `settings.LOG_LEVEL`.

    Returns:
        A configured logging.Logger instance.
    """
    if level is None:
        level = getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Prevents duplicate log messages if get_logger is called multiple times
    if not logger.hasHandlers():
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setLevel(level)
        stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(stream_handler)
        logger.propagate = False

    return logger


def set_level(level: str) -> None:
    """Re-levels every toolkit logger (used by the CLI `--verbose` flag)."""
    numeric = getattr(logging, level.upper(), logging.WARNING)
    for name, logger in logging.root.manager.loggerDict.items():
        if name.startswith("src") and isinstance(logger, logging.Logger):
            logger.setLevel(numeric)
            for handler in logger.handlers:
                handler.setLevel(numeric)
