"""
Ground-truth photon emissions.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.streams import require_sorted
from ..core.timebase import as_time_array
from ..utils import get_logger

logger = get_logger()

NO_PULSE = -1


@dataclass(frozen=True)
class EmissionRecord:
    """
    Emission instants of one acquisition window [0, duration).

    `emission_id` identifies a photon through beamsplitting and detection;
    `pulse_index` is NO_PULSE for CW sources.
    """

    times: np.ndarray
    pulse_index: np.ndarray
    emission_id: np.ndarray
    duration: int

    def __post_init__(self):
        times = as_time_array(self.times)
        pulse_index = as_time_array(self.pulse_index)
        emission_id = as_time_array(self.emission_id)
        if not (times.size == pulse_index.size == emission_id.size):
            raise ValueError("times, pulse_index and emission_id must have equal length")
        if int(self.duration) < 0:
            raise ValueError(f"duration must be non-negative, got {self.duration}")
        require_sorted(times, "emission")
        if times.size and (times[0] < 0 or times[-1] >= int(self.duration)):
            raise ValueError("emission times must lie inside [0, duration)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "pulse_index", pulse_index)
        object.__setattr__(self, "emission_id", emission_id)
        object.__setattr__(self, "duration", int(self.duration))

    def __len__(self) -> int:
        return int(self.times.size)

    @classmethod
    def empty(cls, duration: int) -> "EmissionRecord":
        none = np.zeros(0, dtype=np.int64)
        return cls(times=none, pulse_index=none, emission_id=none, duration=duration)

    @classmethod
    def assemble(
        cls, times: np.ndarray, pulse_index: Optional[np.ndarray], duration: int
    ) -> "EmissionRecord":
        """
        Build a record from generated (possibly unsorted) events.

        Events outside [0, duration) are dropped. A stable sort keeps the
        generation order among equal times, and ids are assigned afterwards.
        """
        times = np.asarray(times, dtype=np.int64)
        if pulse_index is None:
            pulse_index = np.full(times.size, NO_PULSE, dtype=np.int64)
        pulse_index = np.asarray(pulse_index, dtype=np.int64)

        inside = (times >= 0) & (times < duration)
        n_dropped = int(times.size - np.count_nonzero(inside))
        if n_dropped:
            logger.debug(f"Dropped {n_dropped} emission(s) outside [0, {duration}) ps")
            times = times[inside]
            pulse_index = pulse_index[inside]

        order = np.argsort(times, kind="stable")
        return cls(
            times=times[order],
            pulse_index=pulse_index[order],
            emission_id=np.arange(times.size, dtype=np.int64),
            duration=duration,
        )

    def subset(self, mask: np.ndarray) -> "EmissionRecord":
        """Photons selected by a boolean mask, identities preserved."""
        return EmissionRecord(
            times=self.times[mask],
            pulse_index=self.pulse_index[mask],
            emission_id=self.emission_id[mask],
            duration=self.duration,
        )
