"""Exponentially modified Gaussian."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.models import emg_cdf, emg_pdf, emg_survival, emg_value
from src.models.emg import emg_cdf_derivatives, gauss_cdf_derivatives

SIGMA = 28.88
TAU = 400.0


def random_points(n, seed):
    """(x, sigma, tau) triples: log-uniform widths, x from the rise to the far tail."""
    rng = np.random.default_rng(seed)
    sigma = np.exp(rng.uniform(np.log(10.0), np.log(100.0), n))
    tau = np.exp(rng.uniform(np.log(100.0), np.log(2000.0), n))
    x = rng.uniform(-2.0, 1.0, n) * sigma + rng.uniform(0.0, 6.0, n) * tau
    return [(float(a), float(b), float(c)) for a, b, c in zip(x, sigma, tau)]


CONVOLUTION_POINTS = random_points(50, seed=81)
DERIVATIVE_POINTS = random_points(20, seed=82)


def convolved_density(x, sigma, tau):
    """Gaussian (x) exponential density by direct quadrature."""

    def integrand(s):
        return math.exp(-0.5 * ((x - s) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)) * math.exp(-s / tau) / tau

    lo, hi = max(0.0, x - 12 * sigma), x + 12 * sigma
    if hi <= 0:
        return 0.0
    value, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
    return value


class TestValue:
    @pytest.mark.parametrize("x", [1.0, 50.0, 400.0, 4000.0])
    def test_narrow_gaussian_limit_is_the_exponential(self, x):
        tau, amplitude = 400.0, 1000.0
        got = emg_value(x, 0.0, tau / 1e6, tau, amplitude)
        assert got == pytest.approx(amplitude / tau * math.exp(-x / tau), rel=1e-6)

    def test_narrow_gaussian_limit_vanishes_before_t0(self):
        assert emg_value(-1.0, 0.0, 4e-4, 400.0, 1000.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("x, sigma, tau", CONVOLUTION_POINTS)
    def test_agrees_with_numerical_convolution(self, x, sigma, tau):
        assert emg_pdf(x, sigma, tau) == pytest.approx(convolved_density(x, sigma, tau), rel=1e-8)

    def test_background_and_amplitude(self):
        base = emg_pdf(120.0, SIGMA, TAU)
        assert emg_value(1120.0, 1000.0, SIGMA, TAU, 5.0, background=2.0) == pytest.approx(2.0 + 5.0 * base)

    def test_array_in_array_out(self):
        t = np.linspace(-500, 5000, 7)
        out = emg_value(t, 0.0, SIGMA, TAU, 1.0)
        assert isinstance(out, np.ndarray) and out.shape == (7,)
        assert isinstance(emg_value(0.0, 0.0, SIGMA, TAU, 1.0), float)

    def test_stays_finite_at_extreme_ratios(self):
        x = np.array([-1e6, -5000.0, 0.0, 5000.0, 1e6])
        for sigma, tau in ((1000.0, 1.0), (1e-3, 1e4), (28.88, 400.0)):
            pdf = emg_pdf(x, sigma, tau)
            assert np.all(np.isfinite(pdf)) and np.all(pdf >= 0)
            assert np.all(np.isfinite(emg_cdf(x, sigma, tau)))

    def test_rejects_non_positive_widths(self):
        with pytest.raises(ValueError):
            emg_value(0.0, 0.0, 0.0, TAU, 1.0)
        with pytest.raises(ValueError):
            emg_pdf(0.0, SIGMA, -1.0)


class TestDistribution:
    def test_unit_area(self):
        x = np.linspace(-1000, 12_000, 130_001)
        area = integrate.trapezoid(emg_pdf(x, SIGMA, TAU), x)
        assert area == pytest.approx(1.0, abs=1e-6)

    def test_cdf_and_survival_are_complementary(self):
        x = np.linspace(-300, 8000, 200)
        cdf = emg_cdf(x, SIGMA, TAU)
        assert np.allclose(cdf + emg_survival(x, SIGMA, TAU), 1.0, atol=1e-14)
        assert np.all(np.diff(cdf) >= 0)

    def test_survival_keeps_precision_in_the_tail(self):
        x = 20_000.0
        assert emg_survival(x, SIGMA, TAU) == pytest.approx(
            math.exp(0.5 * (SIGMA / TAU) ** 2 - x / TAU), rel=1e-9
        )


class TestDerivatives:
    @pytest.mark.parametrize("x, sigma, tau", DERIVATIVE_POINTS)
    def test_emg_partials_match_finite_differences(self, x, sigma, tau):
        _, _, d_x, d_sigma, d_tau = emg_cdf_derivatives(np.array([x]), sigma, tau)
        h = 1e-4
        fd_x = (emg_cdf(x + h, sigma, tau) - emg_cdf(x - h, sigma, tau)) / (2 * h)
        fd_sigma = (emg_cdf(x, sigma + h, tau) - emg_cdf(x, sigma - h, tau)) / (2 * h)
        fd_tau = (emg_cdf(x, sigma, tau + h) - emg_cdf(x, sigma, tau - h)) / (2 * h)
        assert d_x[0] == pytest.approx(fd_x, rel=1e-5, abs=1e-10)
        assert d_sigma[0] == pytest.approx(fd_sigma, rel=1e-5, abs=1e-10)
        assert d_tau[0] == pytest.approx(fd_tau, rel=1e-5, abs=1e-10)
        assert d_x[0] == pytest.approx(emg_pdf(x, sigma, tau), rel=1e-12)

    def test_gauss_partials_match_finite_differences(self):
        from scipy.special import ndtr

        x, sigma, h = np.array([-40.0, 10.0, 75.0]), 28.88, 1e-4
        _, _, d_x, d_sigma = gauss_cdf_derivatives(x, sigma)
        assert np.allclose(d_x, (ndtr((x + h) / sigma) - ndtr((x - h) / sigma)) / (2 * h), rtol=1e-6)
        assert np.allclose(d_sigma, (ndtr(x / (sigma + h)) - ndtr(x / (sigma - h))) / (2 * h), rtol=1e-6)
