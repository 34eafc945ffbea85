# src/main/logger.py
"""
Centralized logging setup for catsim.

Features:
- Console logging
- Optional debug mode
- Unified logger name: 'catsim'
"""

import logging
import sys

from src.main.constants import LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)


def setup_logging(debug: bool = False, level: str | None = None):
    """Configure application logging.

    `level` (a logging level name such as "WARNING") wins over `debug` when given.
    """
    if level:
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            resolved = logging.INFO
    else:
        resolved = logging.DEBUG if debug else logging.INFO
    logger.setLevel(resolved)

    # Formatter
    formatter = logging.Formatter(
        "[%(asctime)s] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # Console Handler
    ch = logging.StreamHandler(sys.stdout)
    ch.setFormatter(formatter)
    ch.setLevel(resolved)

    # Clear existing handlers to avoid duplicate logs
    if logger.hasHandlers():
        logger.handlers.clear()

    logger.addHandler(ch)

    logger.debug("Logging initialized (level: %s)", logging.getLevelName(resolved))
