"""Model-free full width at half maximum of a histogram peak."""

import math

import numpy as np

from ..core.histogram import Histogram
from .fitting import outer_baseline

MIN_PEAK_COUNTS = 20


def fwhm_of_histogram(h: Histogram) -> int:
    """
    FWHM of the dominant peak, in whole ps.

    The baseline is the median of the outer 5 % of bins on each side.
    Half-maximum crossings are interpolated linearly between bin centers.

    Raises:
        ValueError: peak below 20 counts, no crossing on either side,
            or a peak one bin wide
    """
    counts = h.counts.astype(np.float64)
    peak = int(np.argmax(counts))
    if counts[peak] < MIN_PEAK_COUNTS:
        raise ValueError(f"peak of {counts[peak]:.0f} counts is below {MIN_PEAK_COUNTS}")

    baseline = outer_baseline(counts)
    signal = counts - baseline
    half = 0.5 * signal[peak]
    if half <= 0:
        raise ValueError("peak does not rise above the baseline")

    below_left = np.flatnonzero(signal[:peak] < half)
    below_right = np.flatnonzero(signal[peak + 1 :] < half)
    if below_left.size == 0 or below_right.size == 0:
        raise ValueError("no half-maximum crossing on one side of the peak")

    i = int(below_left[-1])
    j = peak + 1 + int(below_right[0])
    if i == peak - 1 and j == peak + 1:
        raise ValueError("peak is a single bin; FWHM is not resolved")

    centers = h.centers()
    left = _crossing(centers[i], signal[i], centers[i + 1], signal[i + 1], half)
    right = _crossing(centers[j - 1], signal[j - 1], centers[j], signal[j], half)
    return int(math.floor(right - left + 0.5))


def _crossing(x0: float, y0: float, x1: float, y1: float, level: float) -> float:
    if y1 == y0:
        return 0.5 * (x0 + x1)
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)
