"""
Structured Logging

JSON records for machine consumption, rich console records for humans.
Everything goes to stderr so that stdout carries only command payloads.

    from lib.logger import logger, log_command
"""

import json
import logging
import sys
import time
from functools import wraps
from typing import Any, Callable, Optional

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "cogwheel"

# Attributes every LogRecord carries; anything else came in through `extra`
_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", None, None))) | {"message", "asctime"}


class JSONFormatter(logging.Formatter):
    """One JSON object per record, extra fields inlined"""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "timestamp": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key, value in record.__dict__.items():
            if key not in _RESERVED and not key.startswith("_"):
                payload[key] = value
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str, sort_keys=True)


class Logger:
    """Owns handler setup for the package logger"""

    def __init__(self, name: str = LOGGER_NAME):
        self.name = name
        self._handler: Optional[logging.Handler] = None

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(self.name)

    def configure(self, level: str = "INFO", fmt: str = "text") -> logging.Logger:
        """Install (or replace) the single stderr handler; safe to call repeatedly"""
        log = self.logger
        if self._handler is not None:
            log.removeHandler(self._handler)

        if fmt == "json":
            handler: logging.Handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(JSONFormatter())
        else:
            handler = RichHandler(
                console=Console(stderr=True),
                show_path=False,
                rich_tracebacks=False,
            )
            handler.setFormatter(logging.Formatter("%(message)s"))

        log.addHandler(handler)
        log.setLevel(getattr(logging, level.upper(), logging.INFO))
        log.propagate = False
        self._handler = handler
        return log


_manager = Logger()
logger = _manager.logger


def configure_logging(level: str = "INFO", fmt: str = "text") -> logging.Logger:
    """Configure the package logger from settings values"""
    return _manager.configure(level, fmt)


def transcription_note(identity: str, note: str, **fields: Any) -> None:
    """Record a disagreement between a literal printed formula and the computed oracle"""
    logger.info(f"Transcription note [{identity}]: {note}", extra={"note": identity, **fields})


def log_command(func: Callable) -> Callable:
    """
    Decorator that logs command execution

    Usage:
        @log_command
        def run(run_config):
            ...
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        name = f"{func.__module__}.{func.__name__}"
        started = time.perf_counter()
        logger.debug(f"Command started: {name}")
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Command failed: {name}: {e}")
            raise
        elapsed_ms = (time.perf_counter() - started) * 1000
        passed = getattr(result, "passed", None)
        logger.info(
            f"Command finished: {name} in {elapsed_ms:.1f} ms",
            extra={"elapsed_ms": round(elapsed_ms, 3), "passed": passed},
        )
        return result
    return wrapper


__all__ = [
    'Logger',
    'logger',
    'log_command',
    'configure_logging',
    'transcription_note',
    'JSONFormatter',
]
