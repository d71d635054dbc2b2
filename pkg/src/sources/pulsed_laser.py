"""
Gain-switched pulsed laser.

Photon number per pulse is Poissonian. Timing jitter displaces the whole
pulse, so all photons of one pulse share a single Gaussian offset.
"""

from typing import List, Optional, Tuple

import numpy as np

from ..core.rng import RngSeed
from ..core.timebase import check_time, jitter_sigma, to_time_ps
from ..utils import chunk_ranges, get_logger, run_parallel
from .base_source import BaseSource
from .emission import EmissionRecord
from .specs import LaserPulsedSpec

logger = get_logger()

CHUNK_PULSES = 2**20


def _laser_chunk(
    spec: LaserPulsedSpec, seed: RngSeed, chunk_index: int, start: int, stop: int
) -> Tuple[np.ndarray, np.ndarray]:
    rng = seed.generator(chunk_index)
    n = stop - start
    counts = rng.poisson(spec.mean_photon_number, n)
    sigma = jitter_sigma(spec.pulse_jitter_fwhm_ps)
    shift = rng.normal(0.0, sigma, n) if sigma > 0 else np.zeros(n)

    firing = np.flatnonzero(counts)
    pulses = (start + firing).astype(np.int64)
    times = pulses * spec.period_ps + to_time_ps(shift[firing])
    repeats = counts[firing]
    return np.repeat(times, repeats), np.repeat(pulses, repeats)


def generate_laser_pulsed(
    spec: LaserPulsedSpec, n_pulses: int, seed: RngSeed, n_jobs: Optional[int] = None
) -> EmissionRecord:
    """Simulate n_pulses laser pulses; see module docstring for the model."""
    if n_pulses < 0:
        raise ValueError(f"n_pulses must be non-negative, got {n_pulses}")
    duration = check_time(int(n_pulses) * spec.period_ps)
    if n_pulses == 0 or spec.mean_photon_number == 0:
        return EmissionRecord.empty(duration)

    plan = list(chunk_ranges(int(n_pulses), CHUNK_PULSES))
    parts: List[Tuple[np.ndarray, np.ndarray]] = run_parallel(
        _laser_chunk,
        [(spec, seed, index, start, stop) for index, start, stop in plan],
        n_jobs=n_jobs,
        desc="Laser pulses",
        total=len(plan),
    )
    record = EmissionRecord.assemble(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        duration,
    )
    logger.debug(f"Laser source: {len(record)} photons from {n_pulses} pulses")
    return record


class PulsedLaserSource(BaseSource):
    """Gain-switched laser."""

    pulsed = True

    def generate(self, extent: int, seed: RngSeed, n_jobs: Optional[int] = None) -> EmissionRecord:
        return generate_laser_pulsed(self.spec, extent, seed, n_jobs=n_jobs)
