"""
CW-pumped emitter, modelled as a two-stage renewal process.

After each emission (and at t = 0) the emitter waits Exp(1/rate) to be
re-excited and then Exp(lifetime) to emit. This is an extension model with
no pulse structure; pulse_index is NO_PULSE throughout.
"""

from typing import List, Optional

import numpy as np

from ..core.rng import RngSeed
from ..core.timebase import PS_PER_SECOND, check_time, to_time_ps
from ..utils import get_logger
from .base_source import BaseSource
from .emission import EmissionRecord
from .specs import CwEmitterSpec

logger = get_logger()

MIN_BLOCK = 1024
MAX_BLOCK = 2**22


def generate_cw_emitter(
    spec: CwEmitterSpec, duration: int, seed: RngSeed, n_jobs: Optional[int] = None
) -> EmissionRecord:
    """
    Simulate emissions over [0, duration).

    The renewal chain is sequential, so gaps are drawn in blocks; block i
    uses seed.generator(i). n_jobs is accepted for interface symmetry.
    """
    if duration < 0:
        raise ValueError(f"duration must be non-negative, got {duration}")
    duration = check_time(int(duration))
    if spec.reexcitation_rate_hz == 0 or duration == 0:
        return EmissionRecord.empty(duration)

    wait_ps = PS_PER_SECOND / spec.reexcitation_rate_hz
    mean_gap = wait_ps + spec.lifetime_ps
    block = int(min(max(1.05 * duration / mean_gap + 100, MIN_BLOCK), MAX_BLOCK))

    blocks: List[np.ndarray] = []
    t = 0.0
    block_index = 0
    while True:
        rng = seed.generator(block_index)
        gaps = rng.exponential(wait_ps, block)
        if spec.lifetime_ps > 0:
            gaps += rng.exponential(spec.lifetime_ps, block)
        arrivals = t + np.cumsum(gaps)
        inside = arrivals[arrivals < duration]
        blocks.append(inside)
        if inside.size < block:
            break
        t = float(arrivals[-1])
        block_index += 1

    times = to_time_ps(np.concatenate(blocks))
    record = EmissionRecord.assemble(times, None, duration)
    logger.debug(f"CW source: {len(record)} emissions in {block_index + 1} block(s)")
    return record


class CwEmitterSource(BaseSource):
    """CW-pumped emitter."""

    pulsed = False

    def generate(self, extent: int, seed: RngSeed, n_jobs: Optional[int] = None) -> EmissionRecord:
        return generate_cw_emitter(self.spec, extent, seed, n_jobs=n_jobs)
