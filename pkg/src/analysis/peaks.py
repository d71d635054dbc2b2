"""
Peak integration on pulsed coincidence histograms.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.signal import find_peaks

from ..core.histogram import Histogram
from ..utils import get_logger

logger = get_logger()


@dataclass(frozen=True)
class PeakAreas:
    """Counts inside the integration window of each peak m in [-n, n]."""

    period: int
    window: int
    center_area: int
    side_areas: Dict[int, int] = field(default_factory=dict)
    centers_ps: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.window > self.period:
            raise ValueError(f"window {self.window} ps exceeds the period {self.period} ps")
        if self.center_area < 0 or any(v < 0 for v in self.side_areas.values()):
            raise ValueError("peak areas must be non-negative")

    @property
    def n_side(self) -> int:
        return len(self.side_areas)

    def side_array(self) -> np.ndarray:
        return np.array([self.side_areas[m] for m in sorted(self.side_areas)], dtype=np.int64)


def _window_sum(centers: np.ndarray, counts: np.ndarray, middle: float, half: float) -> int:
    inside = (centers >= middle - half) & (centers <= middle + half)
    return int(counts[inside].sum())


def integrate_peaks(
    h: Histogram,
    period: int,
    window: int,
    n_side_peaks: int,
    recenter: bool = False,
) -> PeakAreas:
    """
    Sum the bins whose centers lie within +-window/2 of each peak m * period.

    Args:
        h: Coincidence histogram
        period: Repetition period in ps
        window: Full integration window in ps (<= period)
        n_side_peaks: Side peaks per side
        recenter: Move each window to the highest bin within +-window/2 of
            its nominal position (for data with an uncertain period)

    Returns:
        PeakAreas

    Raises:
        ValueError: if the histogram does not span all windows
    """
    if window <= 0 or window > period:
        raise ValueError(f"window must be in (0, period], got {window} for period {period}")
    if n_side_peaks < 0:
        raise ValueError("n_side_peaks must be non-negative")
    half = window / 2.0
    reach = n_side_peaks * period + half
    if h.origin > -reach or h.end < reach:
        raise ValueError(
            f"histogram [{h.origin}, {h.end}) ps does not span {n_side_peaks} side peaks "
            f"with a {window} ps window"
        )

    centers = h.centers()
    counts = h.counts
    areas: Dict[int, int] = {}
    positions: Dict[int, float] = {}
    for m in range(-n_side_peaks, n_side_peaks + 1):
        middle = float(m * period)
        if recenter:
            nearby = np.flatnonzero((centers >= middle - half) & (centers <= middle + half))
            if nearby.size and counts[nearby].max() > 0:
                middle = float(centers[nearby[np.argmax(counts[nearby])]])
        areas[m] = _window_sum(centers, counts, middle, half)
        positions[m] = middle

    center = areas.pop(0)
    logger.debug(f"Center peak {center}, side peaks {list(areas.values())}")
    return PeakAreas(
        period=int(period),
        window=int(window),
        center_area=center,
        side_areas=areas,
        centers_ps=positions,
    )


def estimate_period(h: Histogram, min_separation_ps: Optional[int] = None) -> float:
    """
    Median spacing of the histogram's peaks, in ps.

    Peaks are found with scipy.signal.find_peaks on prominence above a
    quarter of the highest bin.
    """
    counts = h.counts.astype(np.float64)
    if counts.max() <= 0:
        raise ValueError("cannot estimate a period from an empty histogram")
    distance = None
    if min_separation_ps is not None:
        distance = max(1, int(min_separation_ps // h.bin_width))
    peaks, _ = find_peaks(counts, prominence=0.25 * counts.max(), distance=distance)
    if peaks.size < 2:
        raise ValueError(f"found {peaks.size} peak(s); need at least two to estimate a period")
    return float(np.median(np.diff(peaks)) * h.bin_width)
