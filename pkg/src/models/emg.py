"""
Exponentially modified Gaussian (Gaussian IRF convolved with an exponential decay).

With x = t - t0 the kernel term is

    T(x) = exp(sigma^2 / 2tau^2 - x/tau) * erfc(z),   z = sigma/(tau*sqrt2) - x/(sigma*sqrt2)

evaluated as exp(-x^2 / 2sigma^2) * erfcx(z) when z >= 0, so no
intermediate overflows however large sigma/tau gets. Then

    pdf(x) = T / (2 tau)
    cdf(x) = Phi(x/sigma) - T/2
    sf(x)  = Phi(-x/sigma) + T/2
"""

from typing import Tuple, Union

import numpy as np
from scipy.special import erfc, erfcx, ndtr

ArrayLike = Union[float, np.ndarray]

SQRT2 = np.sqrt(2.0)
INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _check_widths(sigma: float, tau: float):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")


def _kernel(x: np.ndarray, sigma: float, tau: float) -> np.ndarray:
    z = sigma / (tau * SQRT2) - x / (sigma * SQRT2)
    out = np.empty_like(z)
    upper = z >= 0
    xu = x[upper]
    out[upper] = np.exp(-0.5 * (xu / sigma) ** 2) * erfcx(z[upper])
    lower = ~upper
    out[lower] = np.exp(0.5 * (sigma / tau) ** 2 - x[lower] / tau) * erfc(z[lower])
    return out


def _normal_pdf(u: np.ndarray) -> np.ndarray:
    return INV_SQRT_2PI * np.exp(-0.5 * u * u)


def _shape(value: np.ndarray, like) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def emg_pdf(x: ArrayLike, sigma: float, tau: float) -> ArrayLike:
    """Unit-area EMG density at offset x = t - t0."""
    _check_widths(sigma, tau)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return _shape(_kernel(xs, sigma, tau) / (2.0 * tau), x)


def emg_value(
    t: ArrayLike,
    t0: float,
    sigma: float,
    tau: float,
    amplitude: float,
    background: float = 0.0,
) -> ArrayLike:
    """
    background + amplitude * EMG density at t.

    Raises:
        ValueError: if sigma or tau is not positive
    """
    _check_widths(sigma, tau)
    xs = np.atleast_1d(np.asarray(t, dtype=np.float64)) - float(t0)
    value = background + amplitude * _kernel(xs, sigma, tau) / (2.0 * tau)
    return _shape(value, t)


def emg_cdf(x: ArrayLike, sigma: float, tau: float) -> ArrayLike:
    _check_widths(sigma, tau)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return _shape(ndtr(xs / sigma) - 0.5 * _kernel(xs, sigma, tau), x)


def emg_survival(x: ArrayLike, sigma: float, tau: float) -> ArrayLike:
    """1 - cdf, accurate far in the right tail."""
    _check_widths(sigma, tau)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return _shape(ndtr(-xs / sigma) + 0.5 * _kernel(xs, sigma, tau), x)


def emg_cdf_derivatives(
    x: np.ndarray, sigma: float, tau: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    CDF, survival and partial derivatives of the CDF.

    Returns:
        (cdf, sf, dF/dx, dF/dsigma, dF/dtau); dF/dt0 is -dF/dx
    """
    _check_widths(sigma, tau)
    x = np.asarray(x, dtype=np.float64)
    kernel = _kernel(x, sigma, tau)
    phi = _normal_pdf(x / sigma)
    cdf = ndtr(x / sigma) - 0.5 * kernel
    sf = ndtr(-x / sigma) + 0.5 * kernel
    d_x = kernel / (2.0 * tau)
    d_sigma = phi / tau - kernel * sigma / (2.0 * tau**2)
    d_tau = -0.5 * kernel * (x / tau**2 - sigma**2 / tau**3) - phi * sigma / tau**2
    return cdf, sf, d_x, d_sigma, d_tau


def gauss_cdf_derivatives(
    x: np.ndarray, sigma: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Gaussian counterpart of emg_cdf_derivatives.

    Returns:
        (cdf, sf, dF/dx, dF/dsigma)
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=np.float64)
    u = x / sigma
    phi = _normal_pdf(u)
    return ndtr(u), ndtr(-u), phi / sigma, -phi * x / sigma**2
