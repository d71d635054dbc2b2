"""Shared domain types: time arithmetic, histograms, click streams, random streams."""

from .histogram import OUT_OF_RANGE, Histogram, bin_index
from .rng import RngSeed
from .streams import StreamReport, TimestampStream, require_sorted, validate_stream
from .timebase import (
    FWHM_PER_SIGMA,
    PS_PER_SECOND,
    fwhm_to_sigma,
    jitter_sigma,
    ps_to_seconds,
    rep_period_ps,
    seconds_to_ps,
    sigma_to_fwhm,
    to_time_ps,
)

__all__ = [
    "Histogram",
    "OUT_OF_RANGE",
    "bin_index",
    "RngSeed",
    "TimestampStream",
    "StreamReport",
    "validate_stream",
    "require_sorted",
    "PS_PER_SECOND",
    "FWHM_PER_SIGMA",
    "fwhm_to_sigma",
    "sigma_to_fwhm",
    "jitter_sigma",
    "rep_period_ps",
    "seconds_to_ps",
    "ps_to_seconds",
    "to_time_ps",
]
