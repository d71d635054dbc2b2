"""Utility modules for the HBT bench."""

from .config import Settings, get_settings, reload_settings
from .exceptions import (
    ConfigError,
    ConvergenceError,
    HbtBenchError,
    StreamValidationError,
    UnsupportedSpecError,
)
from .helpers import chunk_ranges, format_value
from .logger import LogOperation, Logger, get_logger
from .parallel import resolve_jobs, run_parallel

__all__ = [
    # Config
    "Settings",
    "get_settings",
    "reload_settings",
    # Errors
    "HbtBenchError",
    "ConfigError",
    "StreamValidationError",
    "ConvergenceError",
    "UnsupportedSpecError",
    # Logger
    "Logger",
    "LogOperation",
    "get_logger",
    # Helpers
    "chunk_ranges",
    "format_value",
    # Parallel
    "run_parallel",
    "resolve_jobs",
]
