"""
Logging helpers.

Every stateful class owns a named logger built here; the CLI decides the
level and whether a log file is attached.
"""

import logging
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
ROOT_LOGGER = "iotchan"


def build_logger(name: str) -> logging.Logger:
    """Return a logger under the project namespace with a stderr handler."""
    logger = logging.getLogger(f"{ROOT_LOGGER}.{name}")

    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)

    return logger


def configure_logging(level: str = "WARNING", log_file: Optional[str] = None) -> None:
    """Setup logging level and optional file output for the whole project."""
    root = logging.getLogger(ROOT_LOGGER)
    build_logger("cli")
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))

    if log_file and not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)
