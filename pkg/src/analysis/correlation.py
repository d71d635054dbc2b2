"""
Coincidence histograms from two click streams.

Pairs are generated with a searchsorted sweep over the sorted stop stream,
chunked over the start stream, so work and memory grow with n + m + pairs
and never with n * m.
"""

from typing import Iterator, Optional

import numpy as np

from ..core.histogram import Histogram
from ..core.streams import TimestampStream, require_sorted
from ..utils import get_logger

logger = get_logger()

PAIR_CHUNK = 2**16


def _times(stream, name: str) -> np.ndarray:
    return require_sorted(stream, name)


def _axis_bins(half_width: int, bin_width: int) -> int:
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    if half_width < bin_width:
        raise ValueError(f"half window {half_width} ps is narrower than one bin ({bin_width} ps)")
    if (2 * half_width) % bin_width:
        raise ValueError(f"2 * half window ({2 * half_width} ps) must be a multiple of bin_width ({bin_width} ps)")
    return (2 * half_width) // bin_width


def pair_delays(
    a: np.ndarray,
    b: np.ndarray,
    lo: int,
    hi: int,
    same_stream: bool = False,
    chunk: int = PAIR_CHUNK,
) -> Iterator[np.ndarray]:
    """
    Yield delays t_b - t_a with lo <= delay <= hi, one array per chunk of a.

    With same_stream, a click is never paired with itself.
    """
    if a.size == 0 or b.size == 0:
        return
    for start in range(0, a.size, chunk):
        a_chunk = a[start:start + chunk]
        left = np.searchsorted(b, a_chunk + lo, side="left")
        right = np.searchsorted(b, a_chunk + hi, side="right")
        counts = right - left
        total = int(counts.sum())
        if total == 0:
            continue
        owner = np.repeat(np.arange(a_chunk.size), counts)
        offset = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        b_index = left[owner] + offset
        delays = b[b_index] - a_chunk[owner]
        if same_stream:
            delays = delays[b_index != start + owner]
        yield delays


def cross_correlate(a, b, bin_width: int, half_window: int) -> Histogram:
    """
    All-pairs coincidence histogram of t_b - t_a over [-half_window, +half_window).

    Pairs with |t_b - t_a| <= half_window are counted; a pair exactly at
    +half_window goes to the overflow tally. Passing the same stream object
    twice skips self-pairs; distinct streams are always fully paired, even
    when their arrays are views of one buffer.

    Args:
        a: Start channel (TimestampStream or sorted int64 array)
        b: Stop channel
        bin_width: Bin width in ps
        half_window: Half width of the delay axis in ps

    Returns:
        Histogram with origin -half_window

    Raises:
        StreamValidationError: if either stream is unsorted
    """
    ta = _times(a, "channel a")
    tb = _times(b, "channel b")
    n_bins = _axis_bins(int(half_window), int(bin_width))
    same = a is b

    hist = Histogram.empty(-int(half_window), int(bin_width), n_bins)
    for delays in pair_delays(ta, tb, -int(half_window), int(half_window), same_stream=same):
        hist = hist.accumulate(delays)
    logger.debug(f"Cross-correlated {ta.size} x {tb.size} clicks: {hist.total} pairs in window")
    return hist


def start_stop_correlate(start, stop, bin_width: int, range_ps: int, origin: int = 0) -> Histogram:
    """
    Time-to-amplitude converter emulation.

    For each start, only the first stop at or after it, and before the next
    start, is histogrammed.
    """
    ts = _times(start, "start")
    tp = _times(stop, "stop")
    if bin_width <= 0 or range_ps <= 0:
        raise ValueError("bin_width and range_ps must be positive")
    n_bins = -(-int(range_ps) // int(bin_width))
    hist = Histogram.empty(int(origin), int(bin_width), n_bins)
    if ts.size == 0 or tp.size == 0:
        return hist

    first = np.searchsorted(tp, ts, side="left")
    found = first < tp.size
    next_start = np.append(ts[1:], np.iinfo(np.int64).max)
    stop_times = tp[np.minimum(first, tp.size - 1)]
    valid = found & (stop_times < next_start)
    return hist.accumulate(stop_times[valid] - ts[valid])


def folded_side_peak(
    a,
    b,
    period: int,
    bin_width: int,
    n_side: int,
    half_width: int,
) -> Histogram:
    """
    Side peaks 1 <= |m| <= n_side stacked onto one axis.

    Each pair delay is reduced by m * period for its nearest peak m, then
    histogrammed over [-half_width, half_width). Folding on the exact period
    keeps the bins aligned on every peak.
    """
    ta = _times(a, "channel a")
    tb = _times(b, "channel b")
    if period <= 0 or n_side < 1:
        raise ValueError("period must be positive and n_side at least 1")
    if 2 * half_width > period:
        raise ValueError("folded half width must not exceed half a period")
    n_bins = _axis_bins(int(half_width), int(bin_width))
    reach = n_side * period + half_width

    hist = Histogram.empty(-int(half_width), int(bin_width), n_bins)
    for delays in pair_delays(ta, tb, -reach, reach, same_stream=a is b):
        peak = np.rint(delays / period).astype(np.int64)
        side = (np.abs(peak) >= 1) & (np.abs(peak) <= n_side)
        hist = hist.accumulate(delays[side] - peak[side] * period)
    return hist


def singles_rate(stream: TimestampStream, duration_ps: int) -> float:
    """Mean click rate in Hz."""
    return stream.rate_hz(duration_ps)


def acquisition_span(a, b, duration_ps: Optional[int] = None) -> int:
    """Acquisition length: explicit, or first-to-last click over both streams."""
    if duration_ps is not None:
        return int(duration_ps)
    times = [t for t in (_times(a, "a"), _times(b, "b")) if t.size]
    if not times:
        return 0
    return int(max(t[-1] for t in times) - min(t[0] for t in times)) + 1
