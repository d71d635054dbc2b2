"""
Uniform-bin histogram over a picosecond delay axis.

Bins are left-closed, right-open: bin k covers [origin + k*w, origin + (k+1)*w).
Values left of the first edge go to `underflow`, values at or right of the
last edge go to `overflow`; nothing is silently dropped.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

OUT_OF_RANGE = -1


@dataclass(frozen=True)
class Histogram:
    """Immutable histogram of non-negative integer counts."""

    origin: int
    bin_width: int
    counts: np.ndarray
    underflow: int = 0
    overflow: int = 0

    def __post_init__(self):
        if int(self.bin_width) <= 0:
            raise ValueError(f"bin_width must be positive, got {self.bin_width}")
        counts = np.array(self.counts, dtype=np.int64, copy=True).reshape(-1)
        if counts.size < 1:
            raise ValueError("histogram needs at least one bin")
        if np.any(counts < 0):
            raise ValueError("histogram counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "origin", int(self.origin))
        object.__setattr__(self, "bin_width", int(self.bin_width))
        object.__setattr__(self, "underflow", int(self.underflow))
        object.__setattr__(self, "overflow", int(self.overflow))

    @classmethod
    def empty(cls, origin: int, bin_width: int, n_bins: int) -> "Histogram":
        return cls(origin=origin, bin_width=bin_width, counts=np.zeros(n_bins, dtype=np.int64))

    @classmethod
    def from_values(cls, values, origin: int, bin_width: int, n_bins: int) -> "Histogram":
        return cls.empty(origin, bin_width, n_bins).accumulate(values)

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def end(self) -> int:
        """Right edge of the last bin (exclusive)."""
        return self.origin + self.n_bins * self.bin_width

    @property
    def total(self) -> int:
        """Counts inside the axis (tallies excluded)."""
        return int(self.counts.sum())

    def edges(self) -> np.ndarray:
        return self.origin + self.bin_width * np.arange(self.n_bins + 1, dtype=np.int64)

    def centers(self) -> np.ndarray:
        return self.origin + self.bin_width * (np.arange(self.n_bins, dtype=np.float64) + 0.5)

    def bin_index(self, t: int) -> int:
        """Bin holding t, or OUT_OF_RANGE."""
        t = int(t)
        if t < self.origin or t >= self.end:
            return OUT_OF_RANGE
        return (t - self.origin) // self.bin_width

    def accumulate(self, values) -> "Histogram":
        """
        Return a new histogram with values added.

        bincount makes the result independent of the order of values.
        """
        values = np.asarray(values, dtype=np.int64).reshape(-1)
        if values.size == 0:
            return self
        index = np.floor_divide(values - self.origin, self.bin_width)
        below = index < 0
        above = index >= self.n_bins
        inside = ~(below | above)
        added = np.bincount(index[inside], minlength=self.n_bins)
        return Histogram(
            origin=self.origin,
            bin_width=self.bin_width,
            counts=self.counts + added,
            underflow=self.underflow + int(below.sum()),
            overflow=self.overflow + int(above.sum()),
        )

    def same_axis(self, other: "Histogram") -> bool:
        return (
            self.origin == other.origin
            and self.bin_width == other.bin_width
            and self.n_bins == other.n_bins
        )

    def __add__(self, other: "Histogram") -> "Histogram":
        if not isinstance(other, Histogram):
            return NotImplemented
        if not self.same_axis(other):
            raise ValueError("cannot merge histograms with different axes")
        return Histogram(
            origin=self.origin,
            bin_width=self.bin_width,
            counts=self.counts + other.counts,
            underflow=self.underflow + other.underflow,
            overflow=self.overflow + other.overflow,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return (
            self.same_axis(other)
            and np.array_equal(self.counts, other.counts)
            and self.underflow == other.underflow
            and self.overflow == other.overflow
        )

    __hash__ = None

    def translated(self, shift: int) -> "Histogram":
        """Same counts on an axis shifted by `shift` ps."""
        return Histogram(
            origin=self.origin + int(shift),
            bin_width=self.bin_width,
            counts=self.counts,
            underflow=self.underflow,
            overflow=self.overflow,
        )

    def mirrored(self) -> "Histogram":
        """Histogram of negated delays: axis [-end, -origin) with reversed counts."""
        return Histogram(
            origin=-self.end,
            bin_width=self.bin_width,
            counts=self.counts[::-1],
            underflow=self.overflow,
            overflow=self.underflow,
        )

    def slice(self, lo: int, hi: int) -> "Histogram":
        """Sub-histogram of the bins whose left edge lies in [lo, hi)."""
        first = max(0, -((self.origin - int(lo)) // self.bin_width))
        last = min(self.n_bins, -((self.origin - int(hi)) // self.bin_width))
        if last <= first:
            raise ValueError(f"slice [{lo}, {hi}) holds no bins")
        return Histogram(
            origin=self.origin + first * self.bin_width,
            bin_width=self.bin_width,
            counts=self.counts[first:last],
        )


def bin_index(h: Histogram, t: Union[int, np.integer]) -> int:
    """floor((t - origin) / bin_width), or OUT_OF_RANGE outside the axis."""
    return h.bin_index(t)
