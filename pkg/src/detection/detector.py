"""
Single-channel detector model.

The order of operations is fixed:
efficiency -> jitter -> darks -> merge -> dead time -> (gated APD only)
gating -> afterpulses -> dead time.
"""

from typing import Tuple

import numpy as np

from ..core.rng import RngSeed
from ..core.streams import TimestampStream
from ..core.timebase import PS_PER_SECOND, jitter_sigma, to_time_ps
from ..sources.emission import EmissionRecord
from ..utils import get_logger
from .specs import DetectorSpec

logger = get_logger()

# Provenance tags for clicks that do not come from a source photon
DARK = -1
AFTERPULSE = -2
CROSSTALK = -3


def dead_time_mask(times: np.ndarray, dead_time: int) -> np.ndarray:
    """
    Non-paralyzable dead time over sorted click times.

    A click is kept when it is at least dead_time after the last kept click.
    Only runs of clicks closer than dead_time need the sequential scan.
    """
    keep = np.ones(times.size, dtype=bool)
    if dead_time <= 0 or times.size < 2:
        return keep
    close = np.flatnonzero(np.diff(times) < dead_time)
    if close.size == 0:
        return keep

    breaks = np.flatnonzero(np.diff(close) > 1)
    run_starts = np.concatenate([close[:1], close[breaks + 1]])
    run_ends = np.concatenate([close[breaks], close[-1:]]) + 1
    for start, end in zip(run_starts.tolist(), run_ends.tolist()):
        last = times[start]
        for j in range(start + 1, end + 1):
            if times[j] - last < dead_time:
                keep[j] = False
            else:
                last = times[j]
    return keep


def _merge(times: np.ndarray, tags: np.ndarray, extra_times: np.ndarray, extra_tags: np.ndarray):
    times = np.concatenate([times, extra_times])
    tags = np.concatenate([tags, extra_tags])
    order = np.argsort(times, kind="stable")
    return times[order], tags[order]


def _in_gate(times: np.ndarray, spec: DetectorSpec) -> np.ndarray:
    phase = np.mod(times - spec.gate_offset_ps, spec.gate_period_ps)
    return phase < spec.gate_width_ps


def detect_tagged(
    arm: EmissionRecord,
    spec: DetectorSpec,
    duration: int,
    seed: RngSeed,
    channel_id: int = 0,
) -> Tuple[TimestampStream, np.ndarray]:
    """
    Turn the photons reaching one detector into clicks.

    Args:
        arm: Photons arriving at this detector
        spec: Detector parameters
        duration: Acquisition window [0, duration) in ps
        seed: Random stream for this detector
        channel_id: Channel number of the output stream

    Returns:
        (stream, tags): tags[i] is the emission id behind click i, or
        DARK / AFTERPULSE

    Raises:
        ValueError: if duration does not extend past the last photon
    """
    duration = int(duration)
    if len(arm) and duration <= int(arm.times[-1]):
        raise ValueError(
            f"duration {duration} ps must exceed the last photon time {int(arm.times[-1])} ps"
        )
    rng = seed.generator()

    # 1. efficiency
    detected = rng.random(len(arm)) < spec.efficiency
    times = arm.times[detected]
    tags = arm.emission_id[detected]

    # 2. jitter, rounded once; clicks pushed out of the window are lost
    sigma = jitter_sigma(spec.jitter_fwhm_ps)
    if sigma > 0 and times.size:
        times = times + to_time_ps(rng.normal(0.0, sigma, times.size))
        inside = (times >= 0) & (times < duration)
        times, tags = times[inside], tags[inside]

    # 3. darks: Poisson count, uniform times
    n_dark = int(rng.poisson(spec.dark_rate_hz * duration / PS_PER_SECOND))
    dark_times = rng.integers(0, duration, n_dark, dtype=np.int64) if duration > 0 else np.zeros(0, np.int64)

    # 4. merge, 5. dead time
    times, tags = _merge(times, tags, dark_times, np.full(n_dark, DARK, dtype=np.int64))
    keep = dead_time_mask(times, spec.dead_time_ps)
    times, tags = times[keep], tags[keep]

    # 6. gating and afterpulses
    if spec.gated:
        gated = _in_gate(times, spec)
        times, tags = times[gated], tags[gated]
        fires = rng.random(times.size) < spec.afterpulse_prob
        after = times[fires] + to_time_ps(rng.exponential(spec.afterpulse_delay_tau_ps, int(fires.sum())))
        after = after[(after < duration) & _in_gate(after, spec)]
        times, tags = _merge(times, tags, after, np.full(after.size, AFTERPULSE, dtype=np.int64))
        keep = dead_time_mask(times, spec.dead_time_ps)
        times, tags = times[keep], tags[keep]

    logger.debug(
        f"Channel {channel_id}: {len(arm)} photons -> {times.size} clicks "
        f"({int(np.count_nonzero(tags == DARK))} dark)"
    )
    return TimestampStream(channel_id, times), tags


def detect(
    arm: EmissionRecord,
    spec: DetectorSpec,
    duration: int,
    seed: RngSeed,
    channel_id: int = 0,
) -> TimestampStream:
    """Click stream of one detector; see detect_tagged."""
    stream, _ = detect_tagged(arm, spec, duration, seed, channel_id=channel_id)
    return stream


def identity_detector() -> DetectorSpec:
    """A detector with every impairment switched off."""
    return DetectorSpec(efficiency=1.0, dark_rate_hz=0.0, jitter_fwhm_ps=0.0, dead_time_ps=0)
