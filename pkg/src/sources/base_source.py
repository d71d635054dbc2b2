"""
Base class for photon sources.
"""

from abc import ABC, abstractmethod
from typing import Optional

from ..core.rng import RngSeed
from ..core.timebase import check_time
from ..utils import UnsupportedSpecError, get_logger
from .emission import EmissionRecord

logger = get_logger()


class BaseSource(ABC):
    """
    A source wraps its spec and turns an acquisition extent into emissions.

    The extent is a pulse count for pulsed sources and a duration in ps for
    CW sources.
    """

    pulsed: bool = True

    def __init__(self, spec):
        self.spec = spec
        logger.debug(f"Initialized {self.__class__.__name__} from {spec!r}")

    @property
    def kind(self) -> str:
        return self.spec.kind

    @property
    def period_ps(self) -> int:
        if not self.pulsed:
            raise UnsupportedSpecError(f"{self.kind} source has no repetition period")
        return self.spec.period_ps

    def acquisition_duration(self, extent: int) -> int:
        """Length in ps of the window [0, duration) the extent covers."""
        if extent < 0:
            raise ValueError(f"acquisition extent must be non-negative, got {extent}")
        if self.pulsed:
            return check_time(int(extent) * self.period_ps)
        return check_time(int(extent))

    @abstractmethod
    def generate(self, extent: int, seed: RngSeed, n_jobs: Optional[int] = None) -> EmissionRecord:
        """Draw the emissions of one acquisition."""
        pass

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.spec!r})"
