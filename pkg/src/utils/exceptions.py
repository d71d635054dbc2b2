"""
Exception hierarchy for the HBT bench.
The CLI maps each family to its own exit code.
"""

from typing import List, Optional


class HbtBenchError(Exception):
    """Base class for all bench errors."""


class ConfigError(HbtBenchError, ValueError):
    """Invalid run configuration (unknown key, missing key, bad unit, bad value)."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        context = []
        if key:
            context.append(f"key '{key}'")
        if line is not None:
            context.append(f"line {line}")
        suffix = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{message}{suffix}")


class StreamValidationError(HbtBenchError, ValueError):
    """Timestamp or histogram data that violates ordering or format rules."""

    def __init__(self, message: str, index: Optional[int] = None, line: Optional[int] = None):
        self.index = index
        self.line = line
        super().__init__(f"{message} (line {line})" if line is not None else message)


class ConvergenceError(HbtBenchError, RuntimeError):
    """Optimizer failed from every start point."""

    def __init__(self, message: str, trace: Optional[List[str]] = None):
        self.trace = list(trace or [])
        detail = "; ".join(self.trace)
        super().__init__(f"{message}: {detail}" if detail else message)


class UnsupportedSpecError(HbtBenchError, NotImplementedError):
    """Operation not defined for the given source or detector shape."""
