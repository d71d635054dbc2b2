"""
End-to-end reproductions of the reference bench measurements.

These run full Monte Carlo acquisitions and take minutes; deselect with
`pytest -m "not slow"`.
"""

import math

import numpy as np
import pytest
from scipy import stats

from src.analysis import crosstalk_test, replicate
from src.cli import run_cli
from src.cli.reproduce import (
    G2_TARGET,
    _with_p_two,
    hbt_from_config,
    preset_config,
    reproduce_fig2,
    reproduce_fig3,
    reproduce_fig4,
)
from src.core import RngSeed
from src.detection import CrosstalkSpec, inject_crosstalk

from .conftest import make_stream

pytestmark = pytest.mark.slow

XT_DURATION = 10**11
XT_CLICKS = 200_000


def _bright_g2(seed):
    config = _with_p_two(preset_config("fig2-qd", seed.seed), G2_TARGET)
    values = hbt_from_config(config, "bright", n_jobs=1).values
    return values["g2_zero"], values["sigma"]


def _independent_pair(seed):
    rng = seed.generator()
    a = make_stream(np.sort(rng.integers(0, XT_DURATION, XT_CLICKS)), 0)
    b = make_stream(np.sort(rng.integers(0, XT_DURATION, XT_CLICKS)), 1)
    return a, b


def _null_p_value(seed):
    a, b = _independent_pair(seed)
    return crosstalk_test(a, b, 550, 77_000, XT_DURATION).p_value


def _coupled_flags(seed):
    a, b = _independent_pair(seed)
    spec = CrosstalkSpec(coupling=0.01, induced_delay_ps=50_000)
    a, b = inject_crosstalk(a, b, spec, seed.child("crosstalk"), duration=XT_DURATION)
    return crosstalk_test(a, b, 550, 77_000, XT_DURATION).flagged_bins


def test_laser_baseline_and_side_peak_width():
    outputs = reproduce_fig4(seed=41)
    g2, sigma = outputs.values["baseline.g2_zero"], outputs.values["baseline.sigma"]
    assert sigma <= 0.02
    assert abs(g2 - 1.0) <= 3 * sigma
    assert outputs.values["side_peak.fwhm_ps"] == pytest.approx(math.sqrt(2) * 2300, rel=0.05)


def test_antibunching_estimator_over_replications():
    results = np.array(replicate(_bright_g2, range(1000, 2000), n_jobs=-1, desc=None))
    g2, sigma = results[:, 0], results[:, 1]
    assert len(g2) == 1000
    assert abs(g2.mean() - G2_TARGET) <= 0.01
    assert abs(g2.mean() - G2_TARGET) <= 3 * g2.std(ddof=1) / math.sqrt(len(g2))
    assert np.mean(np.abs(g2 - G2_TARGET) <= sigma) >= 0.6


def test_dark_correction_recovers_the_clean_value():
    outputs = reproduce_fig2(seed=43)
    report = outputs.report.values()
    # darks inflate the raw value well above the clean 1 %
    assert float(report["dark_limited.accidentals"]) / float(report["dark_limited.mean_side_area"]) > 0.04
    corrected = outputs.values["dark_limited.g2_zero_corrected"]
    sigma = outputs.values["dark_limited.sigma_corrected"]
    assert abs(corrected - 0.01) <= 3 * sigma


@pytest.fixture(scope="module")
def lifetime_outputs():
    return reproduce_fig3(seed=44)


def test_lifetime_with_measured_irf(lifetime_outputs):
    outputs = lifetime_outputs
    assert outputs.values["irf.fwhm_ps"] == pytest.approx(68.0, rel=0.02)
    assert outputs.values["lifetime.tau_ps"] == pytest.approx(400.0, rel=0.02)
    assert outputs.report.values()["lifetime.sigma_fixed"] == "true"


def test_irf_residuals_are_flat_over_four_decades(lifetime_outputs):
    report = lifetime_outputs.report.values()
    assert float(report["irf.decades_of_fit"]) >= 4
    decades = sorted(int(key.rsplit("_", 1)[1]) for key in report if key.startswith("irf.residual_decade_"))
    # decade 0 holds the near-empty wings, where single dark counts dominate
    fitted = [d for d in decades if d >= 1]
    assert len(fitted) >= 4
    for decade in fitted:
        mean = float(report[f"irf.residual_decade_{decade}"])
        n_bins = int(report[f"irf.bins_decade_{decade}"])
        assert abs(mean) <= 4 / math.sqrt(n_bins), decade


def test_crosstalk_null_p_values_are_uniform():
    p_values = replicate(_null_p_value, range(100), desc=None)
    assert stats.kstest(p_values, "uniform").pvalue > 0.01


def test_injected_crosstalk_is_found_at_its_delay():
    flags = replicate(_coupled_flags, range(200, 220), desc=None)
    found = sum(49_500 in f for f in flags)
    assert found >= 0.95 * len(flags)


@pytest.mark.parametrize("recipe", ["fig2", "fig3", "fig4"])
def test_reproduce_is_byte_identical(tmp_path, recipe):
    first, second = tmp_path / "first", tmp_path / "second"
    assert run_cli(["reproduce", recipe, "--seed", "5", "--out", str(first)]) == 0
    assert run_cli(["reproduce", recipe, "--seed", "5", "--out", str(second)]) == 0
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name
