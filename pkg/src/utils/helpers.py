"""
Helper utilities and common functions used across the project.
"""

import math
from typing import Iterator, Tuple


def chunk_ranges(total: int, chunk_size: int) -> Iterator[Tuple[int, int, int]]:
    """
    Split [0, total) into consecutive ranges.

    Args:
        total: Number of items
        chunk_size: Size of each chunk

    Yields:
        (chunk_index, start, stop) tuples
    """
    if chunk_size <= 0:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")
    for index, start in enumerate(range(0, total, chunk_size)):
        yield index, start, min(start + chunk_size, total)


def format_value(value) -> str:
    """
    Format a report value the same way for machine and human output.

    Floats use 10 significant digits; None becomes "NA".
    """
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return format(value, ".10g")
    return str(value)
