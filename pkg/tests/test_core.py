"""Time arithmetic, histograms, click streams and random streams."""

import numpy as np
import pytest

from src.core import (
    OUT_OF_RANGE,
    Histogram,
    RngSeed,
    TimestampStream,
    bin_index,
    fwhm_to_sigma,
    rep_period_ps,
    require_sorted,
    seconds_to_ps,
    sigma_to_fwhm,
    to_time_ps,
    validate_stream,
)
from src.utils import StreamValidationError


class TestTimebase:
    @pytest.mark.parametrize("fwhm, sigma", [(68, 28.877), (2.3548, 1.0), (2300, 976.7)])
    def test_fwhm_to_sigma_examples(self, fwhm, sigma):
        assert fwhm_to_sigma(fwhm) == pytest.approx(sigma, rel=1e-4)

    @pytest.mark.parametrize("fwhm", [0, -1.0, float("nan")])
    def test_fwhm_to_sigma_rejects_non_positive(self, fwhm):
        with pytest.raises(ValueError):
            fwhm_to_sigma(fwhm)

    def test_fwhm_sigma_round_trip_to_twelve_digits(self):
        for fwhm in np.geomspace(1.0, 1e9, 200):
            assert sigma_to_fwhm(fwhm_to_sigma(fwhm)) == pytest.approx(fwhm, rel=1e-12)

    def test_rep_period_rounds_to_whole_ps(self):
        assert rep_period_ps(82e6) == 12195
        assert rep_period_ps(79e6) == 12658

    def test_to_time_ps_rounds_once(self):
        assert to_time_ps([0.4, 0.6, -1.6]).tolist() == [0, 1, -2]
        assert to_time_ps([1.0]).dtype == np.int64

    def test_time_overflow_is_an_error_not_a_wrap(self):
        with pytest.raises(OverflowError):
            to_time_ps([1e19])
        with pytest.raises(OverflowError):
            to_time_ps([float("inf")])
        with pytest.raises(OverflowError):
            seconds_to_ps(1e8)


class TestHistogram:
    def test_bin_index_examples(self):
        h = Histogram.empty(origin=0, bin_width=550, n_bins=10)
        assert [bin_index(h, t) for t in (0, 549, 550)] == [0, 0, 1]
        centred = Histogram.empty(origin=-27500, bin_width=550, n_bins=100)
        assert bin_index(centred, 0) == 50

    def test_bin_index_out_of_range_never_raises(self):
        h = Histogram.empty(origin=0, bin_width=10, n_bins=3)
        assert bin_index(h, -1) == OUT_OF_RANGE
        assert bin_index(h, 30) == OUT_OF_RANGE

    def test_accumulate_tallies_everything(self):
        h = Histogram.from_values([-5, 0, 9, 10, 29, 30, 100], origin=0, bin_width=10, n_bins=3)
        assert h.counts.tolist() == [2, 1, 1]
        assert h.underflow == 1
        assert h.overflow == 2
        assert h.total + h.underflow + h.overflow == 7

    def test_accumulation_is_order_independent(self):
        values = np.random.default_rng(1).integers(-50, 150, 1000)
        forward = Histogram.from_values(values, origin=0, bin_width=7, n_bins=14)
        backward = Histogram.from_values(values[::-1], origin=0, bin_width=7, n_bins=14)
        split = Histogram.from_values(values[:300], origin=0, bin_width=7, n_bins=14) + Histogram.from_values(
            values[300:], origin=0, bin_width=7, n_bins=14
        )
        assert forward == backward == split

    def test_counts_are_read_only(self):
        h = Histogram.empty(0, 1, 3)
        with pytest.raises(ValueError):
            h.counts[0] = 1

    def test_rejects_bad_axes(self):
        with pytest.raises(ValueError):
            Histogram(origin=0, bin_width=0, counts=[1])
        with pytest.raises(ValueError):
            Histogram(origin=0, bin_width=1, counts=[])
        with pytest.raises(ValueError):
            Histogram(origin=0, bin_width=1, counts=[1, -1])

    def test_merging_different_axes_fails(self):
        with pytest.raises(ValueError):
            Histogram.empty(0, 1, 3) + Histogram.empty(1, 1, 3)

    def test_mirrored_negates_the_axis(self):
        h = Histogram(origin=-20, bin_width=10, counts=[1, 2, 3, 4])
        m = h.mirrored()
        assert m.origin == -20 and m.end == 20
        assert m.counts.tolist() == [4, 3, 2, 1]

    def test_slice_and_translate(self):
        h = Histogram(origin=0, bin_width=10, counts=[1, 2, 3, 4])
        assert h.slice(10, 30).counts.tolist() == [2, 3]
        assert h.translated(5).edges().tolist() == [5, 15, 25, 35, 45]


class TestStreams:
    def test_validate_stream_examples(self):
        assert validate_stream([]).ok
        dup = validate_stream([10, 10, 20])
        assert dup.ok and dup.n_duplicates == 1 and dup.warnings
        bad = validate_stream([10, 5])
        assert not bad.ok and bad.first_violation == 1

    def test_require_sorted_names_the_index(self):
        with pytest.raises(StreamValidationError) as info:
            require_sorted(TimestampStream(0, [1, 2, 3, 2]), "a")
        assert info.value.index == 3

    def test_stream_times_are_read_only_int64(self):
        s = TimestampStream(1, [3, 4])
        assert s.times.dtype == np.int64
        with pytest.raises(ValueError):
            s.times[0] = 0

    def test_rate_hz(self):
        s = TimestampStream(0, np.arange(100))
        assert s.rate_hz(10**12) == pytest.approx(100.0)


class TestRngSeed:
    def test_same_seed_and_label_give_identical_draws(self):
        a = RngSeed(5).child("source").generator(3).random(10)
        b = RngSeed(5).child("source").generator(3).random(10)
        assert np.array_equal(a, b)

    def test_labels_and_chunks_give_distinct_streams(self):
        root = RngSeed(5)
        draws = [
            root.child("det0").generator().random(4),
            root.child("det1").generator().random(4),
            root.child("det0").generator(0).random(4),
            root.child("det0").generator(1).random(4),
        ]
        for i in range(len(draws)):
            for j in range(i + 1, len(draws)):
                assert not np.array_equal(draws[i], draws[j])

    def test_child_labels_nest(self):
        assert RngSeed(1).child("source").stream_label == "root/source"

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_seed_range(self, seed):
        with pytest.raises(ValueError):
            RngSeed(seed)

    def test_key_is_128_bits(self):
        assert 0 <= RngSeed(2**64 - 1).key(7) < 2**128
