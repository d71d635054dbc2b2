"""Shared fixtures."""

import numpy as np
import pytest

from src.core import Histogram, RngSeed, TimestampStream
from src.detection import DetectorSpec
from src.sources import LaserPulsedSpec, QdPulsedSpec


@pytest.fixture
def seed():
    return RngSeed(20240601)


@pytest.fixture
def qd_spec():
    return QdPulsedSpec(rep_rate_hz=82e6, lifetime_ps=400, p_emit=1.0, p_two=0.05)


@pytest.fixture
def laser_spec():
    return LaserPulsedSpec(rep_rate_hz=79e6, mean_photon_number=0.05, pulse_jitter_fwhm_ps=2300)


@pytest.fixture
def ideal_detector():
    """Perfect detector: every photon clicks, on time, with no darks or dead time."""
    return DetectorSpec(efficiency=1.0, dark_rate_hz=0.0, jitter_fwhm_ps=0.0, dead_time_ps=0)


@pytest.fixture
def bench_detector():
    return DetectorSpec(efficiency=0.5, dark_rate_hz=10.0, jitter_fwhm_ps=68.0, dead_time_ps=10_000)


def make_stream(times, channel_id=0):
    return TimestampStream(channel_id, np.asarray(times, dtype=np.int64))


def poisson_histogram(expected, origin=0, bin_width=4, rng=None):
    """Histogram whose counts are one Poisson draw of `expected`."""
    rng = rng or np.random.default_rng(7)
    return Histogram(origin=origin, bin_width=bin_width, counts=rng.poisson(expected))


@pytest.fixture
def stream_factory():
    return make_stream
