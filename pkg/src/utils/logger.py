"""Logging utilities for the embedding lab."""

import logging
import sys
from pathlib import Path
from typing import Optional, Union
from logging.handlers import RotatingFileHandler

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(
    name: str,
    log_file: Optional[Path] = None,
    level: int = logging.INFO,
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    stream=None
) -> logging.Logger:
    """
    Set up a logger with console and optional rotating file handlers.

    Args:
        name: Logger name (the CLI uses 'embedding_lab', modules use __name__)
        log_file: Optional path to log file
        level: Logging level (default: INFO)
        max_bytes: Maximum size of log file before rotation (default: 10MB)
        backup_count: Number of backup log files to keep (default: 5)
        stream: Console stream (default: stdout)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stdout if stream is None else stream)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(level)
    logger.addHandler(console_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(level)
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get or create a logger for a module.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


def set_level(logger: logging.Logger, level: Union[int, str]) -> None:
    """Apply a level (name or number) to a logger and all of its handlers."""
    if isinstance(level, str):
        level = getattr(logging, level.upper())
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


def share_handlers(source: logging.Logger, name: str) -> logging.Logger:
    """Attach the handlers of `source` to the logger `name` (once) so its records reach the same sinks."""
    target = logging.getLogger(name)
    if not target.handlers:
        for handler in source.handlers:
            target.addHandler(handler)
        target.setLevel(source.level)
    return target
