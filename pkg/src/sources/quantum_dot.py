"""
Pulsed quantum-dot source.

Each pulse emits nothing, one photon, or (with conditional probability
p_two) two photons that share the excitation instant but have independent
radiative delays.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from ..core.rng import RngSeed
from ..core.timebase import check_time, jitter_sigma, to_time_ps
from ..utils import chunk_ranges, get_logger, run_parallel
from .base_source import BaseSource
from .emission import EmissionRecord
from .specs import QdPulsedSpec

logger = get_logger()

DENSE_CHUNK_PULSES = 2**20
SPARSE_TARGET_EMISSIONS = 2**20
SPARSE_P_EMIT = 0.01


def chunk_size_for(spec: QdPulsedSpec) -> int:
    """
    Pulses per chunk. Depends on the spec only, never on n_jobs, because the
    chunk layout decides which random stream draws which pulse.
    """
    if spec.p_emit >= SPARSE_P_EMIT:
        return DENSE_CHUNK_PULSES
    return max(DENSE_CHUNK_PULSES, int(math.ceil(SPARSE_TARGET_EMISSIONS / spec.p_emit)))


def _emitting_pulses(
    spec: QdPulsedSpec, rng: np.random.Generator, start: int, stop: int
) -> np.ndarray:
    n = stop - start
    if spec.p_emit >= SPARSE_P_EMIT:
        return start + np.flatnonzero(rng.random(n) < spec.p_emit)
    # Dim source: draw how many pulses emit, then which ones
    k = int(rng.binomial(n, spec.p_emit))
    return start + np.sort(rng.choice(n, size=k, replace=False, shuffle=False))


def _qd_chunk(
    spec: QdPulsedSpec, seed: RngSeed, chunk_index: int, start: int, stop: int
) -> Tuple[np.ndarray, np.ndarray]:
    rng = seed.generator(chunk_index)
    pulses = _emitting_pulses(spec, rng, start, stop).astype(np.int64)
    k = pulses.size

    sigma = jitter_sigma(spec.excitation_jitter_fwhm_ps)
    excitation = rng.normal(0.0, sigma, k) if sigma > 0 else np.zeros(k)
    first = excitation + (rng.exponential(spec.lifetime_ps, k) if spec.lifetime_ps > 0 else 0.0)

    twin = rng.random(k) < spec.p_two
    n_twin = int(np.count_nonzero(twin))
    second = excitation[twin] + (
        rng.exponential(spec.lifetime_ps, n_twin) if spec.lifetime_ps > 0 else 0.0
    )

    base = pulses * spec.period_ps
    times = np.concatenate([base + to_time_ps(first), base[twin] + to_time_ps(second)])
    return times, np.concatenate([pulses, pulses[twin]])


def generate_qd_pulsed(
    spec: QdPulsedSpec, n_pulses: int, seed: RngSeed, n_jobs: Optional[int] = None
) -> EmissionRecord:
    """
    Simulate n_pulses excitation pulses of a quantum dot.

    Args:
        spec: Source parameters
        n_pulses: Number of pump pulses (pulse k fires at k * period)
        seed: Random stream for this source
        n_jobs: joblib workers for chunk generation

    Returns:
        Sorted EmissionRecord over [0, n_pulses * period)

    Raises:
        OverflowError: if the acquisition does not fit the picosecond range
    """
    if n_pulses < 0:
        raise ValueError(f"n_pulses must be non-negative, got {n_pulses}")
    duration = check_time(int(n_pulses) * spec.period_ps)
    if n_pulses == 0 or spec.p_emit == 0:
        return EmissionRecord.empty(duration)

    plan = list(chunk_ranges(int(n_pulses), chunk_size_for(spec)))
    parts: List[Tuple[np.ndarray, np.ndarray]] = run_parallel(
        _qd_chunk,
        [(spec, seed, index, start, stop) for index, start, stop in plan],
        n_jobs=n_jobs,
        desc="QD pulses",
        total=len(plan),
    )
    record = EmissionRecord.assemble(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        duration,
    )
    logger.debug(f"QD source: {len(record)} emissions from {n_pulses} pulses in {len(plan)} chunk(s)")
    return record


class QuantumDotSource(BaseSource):
    """Pulsed quantum dot."""

    pulsed = True

    def generate(self, extent: int, seed: RngSeed, n_jobs: Optional[int] = None) -> EmissionRecord:
        return generate_qd_pulsed(self.spec, extent, seed, n_jobs=n_jobs)
