"""
Loguru setup for the bench.

Console output goes through tqdm.write so progress bars of long simulations
stay on one line. With log_format "json" every record is serialized, bound
context (seed, command, stage) included.
"""

import sys
import time
from pathlib import Path
from typing import Optional

from loguru import logger
from tqdm import tqdm

TEXT_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{module}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)


def _console(message) -> None:
    tqdm.write(str(message), file=sys.stderr, end="")


class Logger:
    """Installs the console sink and an optional rotating file sink."""

    def __init__(
        self,
        log_level: str = "INFO",
        log_format: str = "text",
        log_file: Optional[str] = None,
        rotation: str = "100 MB",
        retention: str = "30 days",
    ):
        """
        Args:
            log_level: loguru level name
            log_format: "text" or "json"
            log_file: Also log to this path when given
            rotation: File rotation policy
            retention: How long rotated files are kept
        """
        self.log_level = log_level.upper()
        self.log_format = log_format
        self.log_file = log_file
        self.rotation = rotation
        self.retention = retention
        self._install()

    @classmethod
    def from_settings(cls, settings, log_level: Optional[str] = None, log_format: Optional[str] = None) -> "Logger":
        """Configure from process Settings, with per-invocation overrides."""
        return cls(
            log_level=log_level or settings.log_level,
            log_format=log_format or settings.log_format,
            log_file=settings.log_file,
        )

    def _install(self):
        logger.remove()
        serialize = self.log_format == "json"
        logger.add(
            _console,
            format="{message}" if serialize else TEXT_FORMAT,
            level=self.log_level,
            colorize=not serialize,
            serialize=serialize,
        )
        if self.log_file:
            path = Path(self.log_file)
            path.parent.mkdir(parents=True, exist_ok=True)
            logger.add(
                str(path),
                format=TEXT_FORMAT,
                level=self.log_level,
                rotation=self.rotation,
                retention=self.retention,
                compression="zip",
                serialize=serialize,
            )


def get_logger():
    """Get the global logger instance."""
    return logger


class LogOperation:
    """Logs start, completion time or failure of a named step, with bound context."""

    def __init__(self, operation_name: str, **context):
        self.operation_name = operation_name
        self.context = {k: v for k, v in context.items() if v is not None}
        self.logger = get_logger().bind(operation=operation_name, **self.context)
        self.elapsed: Optional[float] = None
        self._start = 0.0

    def __enter__(self):
        self._start = time.perf_counter()
        self.logger.info(f"Starting {self.operation_name}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = time.perf_counter() - self._start
        if exc_type:
            self.logger.error(f"{self.operation_name} failed after {self.elapsed:.2f}s ({exc_val})")
        else:
            self.logger.info(f"{self.operation_name} completed in {self.elapsed:.2f}s")
        return False
