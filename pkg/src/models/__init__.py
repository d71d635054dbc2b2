"""
Lifetime and IRF fitting.

- EMG density, CDF and derivatives (emg)
- Poisson maximum-likelihood histogram fits (fitting)
- Model-free peak width (width)
"""

from .emg import emg_cdf, emg_pdf, emg_survival, emg_value
from .fitting import (
    FitOutcome,
    IrfFit,
    LifetimeFit,
    PoissonHistogramFit,
    fit_irf,
    fit_lifetime,
    poisson_deviance,
    residuals_by_decade,
)
from .width import fwhm_of_histogram

__all__ = [
    "emg_value",
    "emg_pdf",
    "emg_cdf",
    "emg_survival",
    "PoissonHistogramFit",
    "FitOutcome",
    "IrfFit",
    "LifetimeFit",
    "fit_irf",
    "fit_lifetime",
    "poisson_deviance",
    "residuals_by_decade",
    "fwhm_of_histogram",
]
