"""Logging configuration for the forbidden-subposet toolkit."""
import logging
import sys
from datetime import datetime
from typing import Any, Mapping

from config import LOGS_DIR

LOGGER_NAME = "forbidden_subposet"


def setup_logging(verbose: bool = False, quiet: bool = False) -> logging.Logger:
    """Configure logging for console and file output.

    Reports are written to stdout, so the console handler always targets stderr.
    ``quiet`` raises the console threshold to WARNING for scripted runs.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.handlers.clear()
    logger.setLevel(logging.DEBUG)

    try:
        LOGS_DIR.mkdir(parents=True, exist_ok=True)
        log_file = LOGS_DIR / f"{datetime.now():%Y-%m-%d}.log"
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter("%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"))
        logger.addHandler(file_handler)
    except OSError:
        pass

    console_handler = logging.StreamHandler(sys.stderr)
    if quiet:
        console_handler.setLevel(logging.WARNING)
    else:
        console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(console_handler)

    return logger


def log_effective_config(logger: logging.Logger, command: str, config: Mapping[str, Any]) -> None:
    """Write the effective run configuration to the log, one key per line."""
    logger.debug(f"{command}: effective configuration")
    for key in sorted(config):
        logger.debug(f"  {key} = {config[key]!r}")
