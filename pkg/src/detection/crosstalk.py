"""
Synthetic cross talk between the two detection channels.
"""

from typing import Optional, Tuple

import numpy as np

from ..core.rng import RngSeed
from ..core.streams import TimestampStream
from ..core.timebase import jitter_sigma, to_time_ps
from ..utils import get_logger
from .detector import CROSSTALK
from .specs import CrosstalkSpec

logger = get_logger()


def _spawn(
    source: np.ndarray, spec: CrosstalkSpec, rng: np.random.Generator, duration: Optional[int]
) -> np.ndarray:
    fires = rng.random(source.size) < spec.coupling
    induced = source[fires] + spec.induced_delay_ps
    sigma = jitter_sigma(spec.induced_jitter_fwhm_ps)
    if sigma > 0:
        induced = induced + to_time_ps(rng.normal(0.0, sigma, induced.size))
    keep = induced >= 0
    if duration is not None:
        keep &= induced < duration
    return induced[keep]


def _add(stream: TimestampStream, tags: np.ndarray, induced: np.ndarray) -> Tuple[TimestampStream, np.ndarray]:
    times = np.concatenate([stream.times, induced])
    tags = np.concatenate([tags, np.full(induced.size, CROSSTALK, dtype=np.int64)])
    order = np.argsort(times, kind="stable")
    return TimestampStream(stream.channel_id, times[order]), tags[order]


def inject_crosstalk_tagged(
    a: TimestampStream,
    b: TimestampStream,
    spec: CrosstalkSpec,
    seed: RngSeed,
    tags_a: Optional[np.ndarray] = None,
    tags_b: Optional[np.ndarray] = None,
    duration: Optional[int] = None,
) -> Tuple[TimestampStream, TimestampStream, np.ndarray, np.ndarray]:
    """
    Like inject_crosstalk, carrying provenance tags (induced clicks get CROSSTALK).

    Induced clicks are computed from the original streams only, so they never
    induce further clicks.
    """
    tags_a = np.full(len(a), CROSSTALK, dtype=np.int64) if tags_a is None else np.asarray(tags_a)
    tags_b = np.full(len(b), CROSSTALK, dtype=np.int64) if tags_b is None else np.asarray(tags_b)
    if spec.coupling == 0:
        return a, b, tags_a, tags_b

    rng = seed.generator()
    into_b = _spawn(a.times, spec, rng, duration)
    into_a = _spawn(b.times, spec, rng, duration)
    new_a, new_tags_a = _add(a, tags_a, into_a)
    new_b, new_tags_b = _add(b, tags_b, into_b)
    logger.debug(f"Cross talk: {into_b.size} induced on ch{b.channel_id}, {into_a.size} on ch{a.channel_id}")
    return new_a, new_b, new_tags_a, new_tags_b


def inject_crosstalk(
    a: TimestampStream,
    b: TimestampStream,
    spec: CrosstalkSpec,
    seed: RngSeed,
    duration: Optional[int] = None,
) -> Tuple[TimestampStream, TimestampStream]:
    """
    Each click on one channel spawns, with probability `coupling`, a click on
    the other channel at +induced_delay (+ Gaussian jitter). coupling = 0 is
    the identity.
    """
    new_a, new_b, _, _ = inject_crosstalk_tagged(a, b, spec, seed, duration=duration)
    return new_a, new_b
