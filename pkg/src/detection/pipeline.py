"""
End-to-end bench pipelines.

run_hbt:   source -> beamsplitter -> two detectors -> cross talk
run_tcspc: pump trigger (start) and one delayed detector (stop)
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.rng import RngSeed
from ..core.streams import TimestampStream
from ..core.timebase import check_time, jitter_sigma, to_time_ps
from ..sources import BaseSource, EmissionRecord, source_from_spec
from ..sources.specs import CwEmitterSpec, LaserPulsedSpec, QdPulsedSpec
from ..utils import UnsupportedSpecError, get_logger, run_parallel
from .beamsplitter import beamsplit
from .crosstalk import inject_crosstalk_tagged
from .detector import detect_tagged
from .specs import CrosstalkSpec, DetectorSpec

logger = get_logger()


@dataclass(frozen=True)
class HbtRun:
    """Click streams of both HBT channels plus the ground truth behind them."""

    stream_a: TimestampStream
    stream_b: TimestampStream
    truth: EmissionRecord
    tags_a: np.ndarray
    tags_b: np.ndarray
    duration: int
    n_pulses: Optional[int] = None


@dataclass(frozen=True)
class TcspcRun:
    """Start (pump trigger) and stop (detector) clicks of a lifetime measurement."""

    start: TimestampStream
    stop: TimestampStream
    truth: EmissionRecord
    stop_tags: np.ndarray
    duration: int
    cable_delay_ps: int


def _as_source(source) -> BaseSource:
    return source if isinstance(source, BaseSource) else source_from_spec(source)


def _resolve_extent(source: BaseSource, n_pulses: Optional[int], duration: Optional[int]) -> int:
    if (n_pulses is None) == (duration is None):
        raise ValueError("give exactly one of n_pulses or duration")
    if source.pulsed:
        if n_pulses is None:
            return int(duration) // source.period_ps
        return int(n_pulses)
    if duration is None:
        raise ValueError(f"{source.kind} source is acquired by duration, not n_pulses")
    return int(duration)


def run_hbt(
    source,
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    seed: RngSeed,
    n_pulses: Optional[int] = None,
    duration: Optional[int] = None,
    crosstalk: Optional[CrosstalkSpec] = None,
    n_jobs: Optional[int] = None,
) -> HbtRun:
    """
    Simulate one HBT acquisition.

    Args:
        source: Source spec or BaseSource
        det_a: Detector on arm A (channel 0)
        det_b: Detector on arm B (channel 1)
        seed: Root seed; stages use the children source, splitter, det0,
            det1 and crosstalk
        n_pulses: Pulse count (pulsed sources)
        duration: Acquisition time in ps (CW sources, or converted to whole
            pulses for pulsed ones)
        crosstalk: Optional cross-talk spec
        n_jobs: joblib workers

    Returns:
        HbtRun
    """
    source = _as_source(source)
    extent = _resolve_extent(source, n_pulses, duration)
    window = source.acquisition_duration(extent)

    truth = source.generate(extent, seed.child("source"), n_jobs=n_jobs)
    arm_a, arm_b = beamsplit(truth, seed.child("splitter"))
    (stream_a, tags_a), (stream_b, tags_b) = run_parallel(
        detect_tagged,
        [
            (arm_a, det_a, window, seed.child("det0"), 0),
            (arm_b, det_b, window, seed.child("det1"), 1),
        ],
        n_jobs=n_jobs,
    )
    if crosstalk is not None and crosstalk.coupling > 0:
        stream_a, stream_b, tags_a, tags_b = inject_crosstalk_tagged(
            stream_a, stream_b, crosstalk, seed.child("crosstalk"), tags_a, tags_b, duration=window
        )

    logger.info(
        f"HBT run: {len(truth)} emissions -> {len(stream_a)} / {len(stream_b)} clicks "
        f"over {window / 1e12:.6g} s"
    )
    return HbtRun(
        stream_a=stream_a,
        stream_b=stream_b,
        truth=truth,
        tags_a=tags_a,
        tags_b=tags_b,
        duration=window,
        n_pulses=extent if source.pulsed else None,
    )


def irf_source(source) -> BaseSource:
    """
    The same source with its emission reduced to the pump instant.

    Lifetime and excitation jitter (or pulse jitter for a laser) are set to
    zero, which is what a detector sees when the monochromator is tuned to
    the laser line.
    """
    spec = getattr(source, "spec", source)
    if isinstance(spec, QdPulsedSpec):
        spec = spec.model_copy(update={"lifetime_ps": 0.0, "excitation_jitter_fwhm_ps": 0.0})
    elif isinstance(spec, LaserPulsedSpec):
        spec = spec.model_copy(update={"pulse_jitter_fwhm_ps": 0.0})
    elif isinstance(spec, CwEmitterSpec):
        raise UnsupportedSpecError("CW sources have no pump instant to measure an IRF against")
    return source_from_spec(spec)


def run_tcspc(
    source,
    detector: DetectorSpec,
    n_pulses: int,
    seed: RngSeed,
    cable_delay_ps: int = 1000,
    trigger_jitter_fwhm_ps: float = 0.0,
    n_jobs: Optional[int] = None,
) -> TcspcRun:
    """
    Simulate a start-stop lifetime measurement.

    A fast photodiode on the pump gives a start click at every pulse; a
    single detector, behind a cable of delay cable_delay_ps, gives the stops.
    """
    source = _as_source(source)
    if not source.pulsed:
        raise UnsupportedSpecError("start-stop lifetime runs need a pulsed source")
    if cable_delay_ps < 0:
        raise ValueError(f"cable delay must be non-negative, got {cable_delay_ps}")

    truth = source.generate(int(n_pulses), seed.child("source"), n_jobs=n_jobs)
    window = check_time(truth.duration + int(cable_delay_ps))

    starts = np.arange(int(n_pulses), dtype=np.int64) * source.period_ps
    sigma = jitter_sigma(trigger_jitter_fwhm_ps)
    if sigma > 0:
        rng = seed.child("trigger").generator()
        starts = np.sort(starts + to_time_ps(rng.normal(0.0, sigma, starts.size)))
        starts = starts[(starts >= 0) & (starts < window)]

    delayed = EmissionRecord(
        times=truth.times + int(cable_delay_ps),
        pulse_index=truth.pulse_index,
        emission_id=truth.emission_id,
        duration=window,
    )
    stop, stop_tags = detect_tagged(delayed, detector, window, seed.child("det0"), channel_id=1)

    logger.info(f"TCSPC run: {starts.size} starts, {len(stop)} stops")
    return TcspcRun(
        start=TimestampStream(0, starts),
        stop=stop,
        truth=truth,
        stop_tags=stop_tags,
        duration=window,
        cable_delay_ps=int(cable_delay_ps),
    )

