"""
Integer-picosecond time arithmetic.

Every recorded time is an int64 count of picoseconds. Continuous quantities
(jitter, exponential delays) are computed in float64 and rounded to nearest
exactly once, when the value is recorded.
"""

import math
from typing import Union

import numpy as np

PS_PER_SECOND = 10**12
TIME_DTYPE = np.int64
TIME_MIN = int(np.iinfo(np.int64).min)
TIME_MAX = int(np.iinfo(np.int64).max)

# 2 * sqrt(2 ln 2)
FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))

# Largest float64 that still converts to int64 without wrapping
_FLOAT_TIME_LIMIT = float(2**63 - 1024)


def fwhm_to_sigma(fwhm: float) -> float:
    """
    Convert a Gaussian full width at half maximum to its standard deviation.

    Args:
        fwhm: Full width at half maximum in ps

    Returns:
        Standard deviation in ps
    """
    if not fwhm > 0:
        raise ValueError(f"FWHM must be positive, got {fwhm}")
    return fwhm / FWHM_PER_SIGMA


def sigma_to_fwhm(sigma: float) -> float:
    """Convert a Gaussian standard deviation to its FWHM."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return sigma * FWHM_PER_SIGMA


def jitter_sigma(fwhm: float) -> float:
    """Like fwhm_to_sigma but maps a zero width to zero (impairment switched off)."""
    if fwhm == 0:
        return 0.0
    return fwhm_to_sigma(fwhm)


def rep_period_ps(rep_rate_hz: float) -> int:
    """Repetition period in whole picoseconds (82 MHz -> 12195 ps)."""
    if not rep_rate_hz > 0:
        raise ValueError(f"repetition rate must be positive, got {rep_rate_hz}")
    return int(round(PS_PER_SECOND / rep_rate_hz))


def seconds_to_ps(seconds: float) -> int:
    """Convert seconds to integer picoseconds, checking the int64 range."""
    value = seconds * PS_PER_SECOND
    if not math.isfinite(value) or abs(value) > _FLOAT_TIME_LIMIT:
        raise OverflowError(f"{seconds} s does not fit the picosecond time range")
    return int(round(value))


def ps_to_seconds(ps: Union[int, float]) -> float:
    return ps / PS_PER_SECOND


def check_time(value: int) -> int:
    """Raise OverflowError unless value fits the int64 picosecond range."""
    if value < TIME_MIN or value > TIME_MAX:
        raise OverflowError(f"time {value} ps exceeds the 64-bit picosecond range")
    return value


def to_time_ps(values) -> np.ndarray:
    """
    Round real-valued times to integer picoseconds.

    Args:
        values: Array-like of float picoseconds

    Returns:
        int64 array

    Raises:
        OverflowError: if any value is non-finite or outside the int64 range
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and (not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) > _FLOAT_TIME_LIMIT):
        raise OverflowError("time value outside the 64-bit picosecond range")
    return np.rint(arr).astype(TIME_DTYPE)


def as_time_array(values) -> np.ndarray:
    """Coerce integer-like input to a read-only int64 array."""
    arr = np.array(values, dtype=TIME_DTYPE, copy=True)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    arr.setflags(write=False)
    return arr
