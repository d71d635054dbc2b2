"""
Detector click records and their ordering checks.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..utils.exceptions import StreamValidationError
from .timebase import PS_PER_SECOND, as_time_array


@dataclass(frozen=True)
class TimestampStream:
    """One channel's click times in integer ps, non-decreasing."""

    channel_id: int
    times: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "channel_id", int(self.channel_id))
        object.__setattr__(self, "times", as_time_array(self.times))

    def __len__(self) -> int:
        return int(self.times.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimestampStream):
            return NotImplemented
        return self.channel_id == other.channel_id and np.array_equal(self.times, other.times)

    __hash__ = None

    @property
    def span_ps(self) -> int:
        """Time between first and last click (0 for fewer than two clicks)."""
        if self.times.size < 2:
            return 0
        return int(self.times[-1] - self.times[0])

    def rate_hz(self, duration_ps: int) -> float:
        """Mean click rate over an acquisition of duration_ps."""
        if duration_ps <= 0:
            raise ValueError(f"duration must be positive, got {duration_ps}")
        return len(self) * PS_PER_SECOND / duration_ps


@dataclass
class StreamReport:
    """Outcome of validate_stream."""

    ok: bool
    first_violation: Optional[int] = None
    n_duplicates: int = 0
    warnings: List[str] = field(default_factory=list)


def validate_stream(stream) -> StreamReport:
    """
    Check the ordering invariant of a stream.

    Never raises; equal timestamps are allowed but reported as a warning.

    Args:
        stream: TimestampStream or array-like of times

    Returns:
        StreamReport with the first offending index when times decrease
    """
    times = stream.times if isinstance(stream, TimestampStream) else np.asarray(stream, dtype=np.int64)
    if times.size < 2:
        return StreamReport(ok=True)

    steps = np.diff(times)
    backwards = np.flatnonzero(steps < 0)
    n_duplicates = int(np.count_nonzero(steps == 0))
    warnings = []
    if n_duplicates:
        warnings.append(f"{n_duplicates} duplicate timestamp(s)")

    if backwards.size:
        return StreamReport(
            ok=False,
            first_violation=int(backwards[0]) + 1,
            n_duplicates=n_duplicates,
            warnings=warnings,
        )
    return StreamReport(ok=True, n_duplicates=n_duplicates, warnings=warnings)


def require_sorted(stream, name: str = "stream") -> np.ndarray:
    """Return the times of a stream, raising StreamValidationError if unsorted."""
    report = validate_stream(stream)
    if not report.ok:
        raise StreamValidationError(
            f"{name} times decrease at index {report.first_violation}",
            index=report.first_violation,
        )
    if isinstance(stream, TimestampStream):
        return stream.times
    return np.asarray(stream, dtype=np.int64)
