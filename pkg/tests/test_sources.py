"""Photon sources and the analytic coincidence oracle."""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from src.analysis import cross_correlate, g2_zero, integrate_peaks
from src.core import RngSeed, fwhm_to_sigma
from src.detection import DetectorSpec, run_hbt
from src.sources import (
    NO_PULSE,
    CwEmitterSpec,
    EmissionRecord,
    LaserPulsedSpec,
    QdPulsedSpec,
    expected_coincidence_rates,
    generate_cw_emitter,
    generate_laser_pulsed,
    generate_qd_pulsed,
    solve_p_two,
    source_from_spec,
)
from src.sources.quantum_dot import DENSE_CHUNK_PULSES, chunk_size_for
from src.utils import UnsupportedSpecError


class TestSpecs:
    def test_period_is_rounded_from_rate(self):
        assert QdPulsedSpec().period_ps == 12195
        assert LaserPulsedSpec().period_ps == 12658

    def test_specs_are_frozen_and_strict(self):
        spec = QdPulsedSpec()
        with pytest.raises(ValidationError):
            spec.p_emit = 0.5
        with pytest.raises(ValidationError):
            QdPulsedSpec(lifetime=400)
        with pytest.raises(ValidationError):
            QdPulsedSpec(p_two=1.5)

    def test_factory_dispatches_on_kind(self):
        assert source_from_spec(QdPulsedSpec()).kind == "qd_pulsed"
        assert source_from_spec(LaserPulsedSpec()).pulsed
        cw = source_from_spec(CwEmitterSpec())
        assert not cw.pulsed
        with pytest.raises(UnsupportedSpecError):
            cw.period_ps


class TestEmissionRecord:
    def test_assemble_sorts_and_drops_out_of_window(self):
        record = EmissionRecord.assemble(np.array([30, -2, 10, 100]), np.array([3, 0, 1, 9]), duration=100)
        assert record.times.tolist() == [10, 30]
        assert record.pulse_index.tolist() == [1, 3]
        assert record.emission_id.tolist() == [0, 1]

    def test_rejects_events_outside_the_window(self):
        with pytest.raises(ValueError):
            EmissionRecord(times=[5], pulse_index=[0], emission_id=[0], duration=5)

    def test_cw_pulse_index_is_no_pulse(self):
        record = EmissionRecord.assemble(np.array([1, 2]), None, duration=10)
        assert (record.pulse_index == NO_PULSE).all()


class TestQuantumDot:
    def test_without_two_photon_events_no_pulse_repeats(self, seed):
        spec = QdPulsedSpec(p_emit=0.7, p_two=0.0)
        record = generate_qd_pulsed(spec, 50_000, seed)
        assert np.unique(record.pulse_index).size == len(record)

    def test_emission_count_matches_probabilities(self, seed):
        spec = QdPulsedSpec(p_emit=0.6, p_two=0.25)
        n = 200_000
        record = generate_qd_pulsed(spec, n, seed)
        expected = n * spec.p_emit * (1 + spec.p_two)
        assert abs(len(record) - expected) < 5 * math.sqrt(expected)

    def test_delays_are_exponential_with_the_lifetime(self, seed):
        spec = QdPulsedSpec(lifetime_ps=400, p_emit=1.0)
        record = generate_qd_pulsed(spec, 100_000, seed)
        delays = record.times - record.pulse_index * spec.period_ps
        assert delays.min() >= 0
        assert delays.mean() == pytest.approx(400, rel=0.01)

    def test_record_is_sorted_inside_the_window(self, seed):
        spec = QdPulsedSpec(lifetime_ps=4000, excitation_jitter_fwhm_ps=500)
        record = generate_qd_pulsed(spec, 10_000, seed)
        assert np.all(np.diff(record.times) >= 0)
        assert record.times[0] >= 0 and record.times[-1] < record.duration == 10_000 * spec.period_ps

    def test_excitation_jitter_rarely_leads_the_pulse(self, seed):
        spec = QdPulsedSpec(lifetime_ps=400, p_emit=1.0, excitation_jitter_fwhm_ps=300)
        record = generate_qd_pulsed(spec, 1_000_000, seed)
        lead = record.pulse_index * spec.period_ps - record.times
        sigma = fwhm_to_sigma(300)
        assert np.count_nonzero(lead > 0) > 0
        assert np.mean(lead > 6 * sigma) <= 1e-6

    def test_same_seed_replays_byte_identical(self):
        spec = QdPulsedSpec(p_two=0.1)
        a = generate_qd_pulsed(spec, 20_000, RngSeed(9))
        b = generate_qd_pulsed(spec, 20_000, RngSeed(9))
        assert a.times.tobytes() == b.times.tobytes()
        assert not np.array_equal(a.times, generate_qd_pulsed(spec, 20_000, RngSeed(10)).times)

    def test_result_does_not_depend_on_n_jobs(self, seed):
        spec = QdPulsedSpec(p_emit=0.05, p_two=0.1)
        n = 2 * DENSE_CHUNK_PULSES + 123
        serial = generate_qd_pulsed(spec, n, seed, n_jobs=1)
        parallel = generate_qd_pulsed(spec, n, seed, n_jobs=2)
        assert np.array_equal(serial.times, parallel.times)
        assert np.array_equal(serial.pulse_index, parallel.pulse_index)

    def test_chunk_size_depends_on_spec_only(self):
        assert chunk_size_for(QdPulsedSpec(p_emit=1.0)) == DENSE_CHUNK_PULSES
        assert chunk_size_for(QdPulsedSpec(p_emit=1e-6)) == math.ceil(2**20 / 1e-6)

    def test_dim_source_costs_emissions_not_pulses(self, seed):
        spec = QdPulsedSpec(p_emit=1e-6)
        record = generate_qd_pulsed(spec, 10**10, seed)
        assert abs(len(record) - 10_000) < 5 * 100
        assert np.all(np.diff(record.pulse_index) >= 0)

    def test_zero_pulses_gives_empty_record(self, seed):
        assert len(generate_qd_pulsed(QdPulsedSpec(), 0, seed)) == 0

    def test_overflowing_acquisition_raises(self, seed):
        with pytest.raises(OverflowError):
            generate_qd_pulsed(QdPulsedSpec(), 10**15, seed)


class TestPulsedLaser:
    def test_photon_number_is_poisson(self, seed):
        spec = LaserPulsedSpec(mean_photon_number=0.3, pulse_jitter_fwhm_ps=0)
        n = 200_000
        record = generate_laser_pulsed(spec, n, seed)
        per_pulse = np.bincount(record.pulse_index, minlength=n)
        assert per_pulse.mean() == pytest.approx(0.3, rel=0.02)
        assert per_pulse.var() == pytest.approx(0.3, rel=0.03)

    def test_photons_of_a_pulse_share_one_displacement(self, seed):
        spec = LaserPulsedSpec(mean_photon_number=3.0, pulse_jitter_fwhm_ps=2300)
        record = generate_laser_pulsed(spec, 2000, seed)
        offsets = record.times - record.pulse_index * spec.period_ps
        for pulse in np.unique(record.pulse_index)[:200]:
            assert np.ptp(offsets[record.pulse_index == pulse]) == 0

    def test_pulse_jitter_has_untruncated_gaussian_tails(self, seed):
        spec = LaserPulsedSpec(mean_photon_number=1.0, pulse_jitter_fwhm_ps=2300)
        record = generate_laser_pulsed(spec, 1_000_000, seed)
        pulses, first = np.unique(record.pulse_index, return_index=True)
        lead = (pulses * spec.period_ps - record.times[first]) / fwhm_to_sigma(2300)
        expected = stats.norm.sf(3.0) * pulses.size
        assert abs(np.count_nonzero(lead > 3.0) - expected) <= 3 * math.sqrt(expected)
        assert np.mean(lead > 6.0) <= 1e-6

    def test_jitter_width(self, seed):
        spec = LaserPulsedSpec(mean_photon_number=1.0, pulse_jitter_fwhm_ps=2300)
        record = generate_laser_pulsed(spec, 100_000, seed)
        offsets = record.times - record.pulse_index * spec.period_ps
        assert offsets.std() == pytest.approx(2300 / 2.35482, rel=0.02)


class TestCwEmitter:
    def test_rate_follows_the_renewal_gaps(self, seed):
        spec = CwEmitterSpec(reexcitation_rate_hz=1e7, lifetime_ps=400)
        duration = 10**11
        record = generate_cw_emitter(spec, duration, seed)
        expected = duration / (1e5 + 400)
        assert abs(len(record) - expected) < 5 * math.sqrt(expected)
        assert (record.pulse_index == NO_PULSE).all()

    def test_zero_rate_is_empty(self, seed):
        assert len(generate_cw_emitter(CwEmitterSpec(reexcitation_rate_hz=0), 10**9, seed)) == 0

    def test_cw_record_is_sorted(self, seed):
        spec = CwEmitterSpec(reexcitation_rate_hz=1e8, lifetime_ps=0)
        record = generate_cw_emitter(spec, 10**9, seed)
        assert np.all(np.diff(record.times) >= 0)


class TestOracle:
    def test_single_photon_source_has_zero_g2(self):
        result = expected_coincidence_rates(QdPulsedSpec(p_two=0.0), 0.1, 0.1)
        assert result.center_per_pulse == 0.0
        assert result.g2_zero == 0.0

    def test_laser_g2_is_exactly_one(self):
        for merge in (True, False):
            result = expected_coincidence_rates(LaserPulsedSpec(mean_photon_number=0.5), 0.3, 0.7, merge_same_arm=merge)
            assert result.g2_zero == pytest.approx(1.0, abs=1e-15)

    def test_cw_source_is_unsupported(self):
        with pytest.raises(UnsupportedSpecError):
            expected_coincidence_rates(CwEmitterSpec(), 0.5, 0.5)

    def test_window_containment_is_a_probability(self):
        wide = expected_coincidence_rates(QdPulsedSpec(p_two=0.1), 0.5, 0.5, window_ps=12000, jitter_fwhm_a_ps=68)
        narrow = expected_coincidence_rates(QdPulsedSpec(p_two=0.1), 0.5, 0.5, window_ps=500, jitter_fwhm_a_ps=68)
        assert 0 < narrow.containment_center < wide.containment_center <= 1
        assert wide.containment_center == pytest.approx(1.0, abs=1e-6)

    def test_solve_p_two_hits_the_target(self):
        p_two = solve_p_two(0.081, 1.0, 0.02, 0.02)
        spec = QdPulsedSpec(p_emit=1.0, p_two=p_two)
        assert expected_coincidence_rates(spec, 0.02, 0.02).g2_zero == pytest.approx(0.081, rel=1e-9)
        assert 0.03 < p_two < 0.06

    def test_solve_p_two_rejects_unreachable_targets(self):
        with pytest.raises(ValueError):
            solve_p_two(5.0, 1.0, 0.5, 0.5)


def _ideal(efficiency, dead_time_ps):
    return DetectorSpec(efficiency=efficiency, dark_rate_hz=0, jitter_fwhm_ps=0, dead_time_ps=dead_time_ps)


@pytest.mark.parametrize(
    "spec, eta, merge",
    [
        (QdPulsedSpec(p_emit=1.0, p_two=0.2), 1.0, True),
        (QdPulsedSpec(p_emit=1.0, p_two=0.2), 1.0, False),
        (QdPulsedSpec(p_emit=0.5, p_two=0.5), 0.6, True),
        (QdPulsedSpec(p_emit=0.8, p_two=0.05), 0.9, False),
        (LaserPulsedSpec(mean_photon_number=0.5, pulse_jitter_fwhm_ps=0), 1.0, False),
        (LaserPulsedSpec(mean_photon_number=0.8, pulse_jitter_fwhm_ps=500), 0.7, True),
    ],
)
def test_monte_carlo_peak_areas_match_the_oracle(spec, eta, merge):
    """Center and mean side areas within 3 Poisson sigma of the analytic expectation."""
    n_pulses = 200_000
    detector = _ideal(eta, 3000 if merge else 0)
    run = run_hbt(spec, detector, detector, RngSeed(31), n_pulses=n_pulses)
    hist = cross_correlate(run.stream_a, run.stream_b, 550, 66_000)
    peaks = integrate_peaks(hist, spec.period_ps, spec.period_ps, 4)

    oracle = expected_coincidence_rates(spec, eta, eta, merge_same_arm=merge)
    center = oracle.center_per_pulse * n_pulses
    side = oracle.side_per_pulse * n_pulses
    assert abs(peaks.center_area - center) <= 3 * math.sqrt(max(center, 1.0))
    assert abs(peaks.side_array().mean() - side) <= 3 * math.sqrt(side / peaks.n_side)


@pytest.mark.slow
def test_g2_estimate_closes_in_on_the_oracle():
    spec = QdPulsedSpec(p_emit=1.0, p_two=0.1)
    detector = _ideal(0.3, 3000)
    truth = expected_coincidence_rates(spec, 0.3, 0.3).g2_zero
    sigmas = []
    for k, n_pulses in enumerate((20_000, 200_000, 2_000_000)):
        run = run_hbt(spec, detector, detector, RngSeed(70 + k), n_pulses=n_pulses)
        hist = cross_correlate(run.stream_a, run.stream_b, 550, 66_000)
        result = g2_zero(integrate_peaks(hist, spec.period_ps, spec.period_ps, 4))
        assert abs(result.g2_zero - truth) <= 3 * result.sigma, n_pulses
        sigmas.append(result.sigma)
    assert sigmas[0] > sigmas[1] > sigmas[2]
    assert sigmas[2] < 0.5 * sigmas[0] / math.sqrt(10)
