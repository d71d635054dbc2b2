"""
Poisson maximum-likelihood fits of start-stop histograms.

Two models share one engine:
  - "gauss": Gaussian IRF plus flat background
  - "emg":   Gaussian IRF convolved with an exponential decay, plus background

The model is integrated over each bin (difference of the CDF at the bin
edges) rather than sampled at bin centers. The engine minimises the
Poisson deviance with L-BFGS-B in the transformed parameters
(u, ln sigma, ln tau, ln A, B), where u = (t0 - origin) / bin_width, so
every fit depends on the histogram only through its counts and bin width.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize

from ..core.histogram import Histogram
from ..core.timebase import FWHM_PER_SIGMA
from ..utils import ConvergenceError, get_logger
from .emg import emg_cdf_derivatives, gauss_cdf_derivatives

logger = get_logger()

MAX_ITER = 500
MIN_POPULATED_BINS = 10
_MU_FLOOR = 1e-300
_BOUND_TOL = 1e-6
# largest projected gradient, relative to the deviance, accepted after a line-search stall
STALL_GTOL = 1e-4


def poisson_deviance(y: np.ndarray, mu: np.ndarray) -> float:
    """2 * sum(mu - y + y * ln(y / mu)), with 0 * ln 0 = 0."""
    y = np.asarray(y, dtype=np.float64)
    mu = np.maximum(np.asarray(mu, dtype=np.float64), _MU_FLOOR)
    positive = y > 0
    log_term = np.zeros_like(y)
    log_term[positive] = y[positive] * np.log(y[positive] / mu[positive])
    return float(2.0 * np.sum(mu - y + log_term))


def outer_baseline(counts: np.ndarray, fraction: float = 0.05) -> float:
    """Median of the outer `fraction` of bins on each side (at least one bin each)."""
    counts = np.asarray(counts, dtype=np.float64)
    k = max(1, int(math.floor(fraction * counts.size)))
    return float(np.median(np.concatenate([counts[:k], counts[-k:]])))


def residuals_by_decade(y: np.ndarray, mu: np.ndarray) -> pd.DataFrame:
    """
    Mean Pearson residual (y - mu) / sqrt(mu), grouped by decade of mu.

    Bins with mu below 1 count are grouped into decade 0.
    """
    y = np.asarray(y, dtype=np.float64)
    mu = np.maximum(np.asarray(mu, dtype=np.float64), _MU_FLOOR)
    frame = pd.DataFrame(
        {
            "decade": np.floor(np.log10(np.maximum(mu, 1.0))).astype(int),
            "residual": (y - mu) / np.sqrt(mu),
        }
    )
    summary = frame.groupby("decade")["residual"].agg(["count", "mean"]).reset_index()
    return summary.rename(columns={"count": "n_bins", "mean": "mean_residual"})


@dataclass
class FitOutcome:
    """Raw result of PoissonHistogramFit.fit."""

    params: Dict[str, float]
    errors: Dict[str, float]
    covariance: np.ndarray
    parameter_names: List[str]
    deviance: float
    dof: int
    expected: np.ndarray
    n_iterations: int
    at_bound: List[str] = field(default_factory=list)
    trace: List[str] = field(default_factory=list)


class PoissonHistogramFit:
    """
    Poisson-deviance fit engine for one histogram and one model.

    Args:
        h: Histogram to fit
        model: "gauss" or "emg"
        fix_sigma: Hold the IRF sigma (ps) at this value
    """

    def __init__(self, h: Histogram, model: str = "emg", fix_sigma: Optional[float] = None):
        if model not in ("gauss", "emg"):
            raise ValueError(f"unknown model {model!r}")
        if fix_sigma is not None and not fix_sigma > 0:
            raise ValueError(f"fixed sigma must be positive, got {fix_sigma}")
        populated = int(np.count_nonzero(h.counts))
        if populated < MIN_POPULATED_BINS:
            raise ValueError(f"need at least {MIN_POPULATED_BINS} populated bins, got {populated}")

        self.h = h
        self.model = model
        self.fix_sigma = fix_sigma
        self.y = h.counts.astype(np.float64)
        self.width = float(h.bin_width)
        # Edges relative to the origin, in ps
        self.edges = self.width * np.arange(h.n_bins + 1, dtype=np.float64)
        self.names = ["u"]
        if fix_sigma is None:
            self.names.append("ln_sigma")
        if model == "emg":
            self.names.append("ln_tau")
        self.names += ["ln_amplitude", "background"]

    # -- parameter plumbing -------------------------------------------------

    def _unpack(self, theta: np.ndarray) -> Dict[str, float]:
        values = dict(zip(self.names, theta))
        return {
            "shift": values["u"] * self.width,
            "sigma": self.fix_sigma if self.fix_sigma is not None else math.exp(values["ln_sigma"]),
            "tau": math.exp(values["ln_tau"]) if self.model == "emg" else None,
            "amplitude": math.exp(values["ln_amplitude"]),
            "background": values["background"],
        }

    def pack(self, t0_rel: float, sigma: float, tau: Optional[float], amplitude: float, background: float) -> np.ndarray:
        """Optimizer vector from natural values (t0 relative to the origin)."""
        values = {
            "u": t0_rel / self.width,
            "ln_sigma": math.log(sigma),
            "ln_tau": math.log(tau) if tau else 0.0,
            "ln_amplitude": math.log(max(amplitude, 1e-3)),
            "background": max(background, 0.0),
        }
        return np.array([values[name] for name in self.names], dtype=np.float64)

    def bounds(self) -> List[Tuple[float, float]]:
        n = self.h.n_bins
        total = float(self.y.sum())
        span = n * self.width
        limits = {
            "u": (-float(n), 2.0 * n),
            "ln_sigma": (math.log(1e-3 * self.width), math.log(span)),
            "ln_tau": (math.log(1e-3 * self.width), math.log(10.0 * span)),
            "ln_amplitude": (math.log(1e-3), math.log(100.0 * (total + 1.0))),
            "background": (0.0, 10.0 * float(self.y.max()) + 10.0),
        }
        return [limits[name] for name in self.names]

    # -- model ----------------------------------------------------------------

    def _bin_terms(self, p: Dict[str, float]):
        """Bin probabilities and their derivatives w.r.t. t0, sigma, tau."""
        x = self.edges - p["shift"]
        if self.model == "emg":
            cdf, sf, d_x, d_sigma, d_tau = emg_cdf_derivatives(x, p["sigma"], p["tau"])
        else:
            cdf, sf, d_x, d_sigma = gauss_cdf_derivatives(x, p["sigma"])
            d_tau = None
        left = x[:-1]
        # Right of the peak use survival differences to keep precision in the tail
        prob = np.where(left > 0, sf[:-1] - sf[1:], cdf[1:] - cdf[:-1])
        prob = np.maximum(prob, 0.0)
        d_t0 = -(d_x[1:] - d_x[:-1])
        d_s = d_sigma[1:] - d_sigma[:-1]
        d_t = None if d_tau is None else d_tau[1:] - d_tau[:-1]
        return prob, d_t0, d_s, d_t

    def expected(self, theta: np.ndarray) -> np.ndarray:
        p = self._unpack(theta)
        prob, _, _, _ = self._bin_terms(p)
        return p["amplitude"] * prob + p["background"]

    def _mu_and_jacobian(self, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """mu and d mu / d theta in optimizer coordinates."""
        p = self._unpack(theta)
        prob, d_t0, d_s, d_t = self._bin_terms(p)
        amp = p["amplitude"]
        mu = amp * prob + p["background"]
        columns = {
            "u": amp * d_t0 * self.width,
            "ln_sigma": amp * d_s * p["sigma"],
            "ln_tau": None if d_t is None else amp * d_t * p["tau"],
            "ln_amplitude": amp * prob,
            "background": np.ones_like(prob),
        }
        jac = np.column_stack([columns[name] for name in self.names])
        return mu, jac

    def deviance(self, theta: np.ndarray) -> float:
        return poisson_deviance(self.y, self.expected(theta))

    def deviance_and_gradient(self, theta: np.ndarray) -> Tuple[float, np.ndarray]:
        mu, jac = self._mu_and_jacobian(theta)
        mu = np.maximum(mu, _MU_FLOOR)
        dev = poisson_deviance(self.y, mu)
        grad = 2.0 * jac.T @ (1.0 - self.y / mu)
        return dev, grad

    def natural_covariance(self, theta: np.ndarray) -> Tuple[List[str], np.ndarray]:
        """Inverse Fisher information in (t0, sigma, tau, amplitude, background)."""
        p = self._unpack(theta)
        prob, d_t0, d_s, d_t = self._bin_terms(p)
        amp = p["amplitude"]
        mu = np.maximum(amp * prob + p["background"], _MU_FLOOR)
        columns = {"t0": amp * d_t0}
        if self.fix_sigma is None:
            columns["sigma"] = amp * d_s
        if d_t is not None:
            columns["tau"] = amp * d_t
        columns["amplitude"] = prob
        columns["background"] = np.ones_like(prob)
        names = list(columns)
        jac = np.column_stack([columns[n] for n in names])
        fisher = jac.T @ (jac / mu[:, None])
        return names, np.linalg.pinv(fisher)

    # -- starting points ----------------------------------------------------

    def heuristic_starts(self) -> List[np.ndarray]:
        """
        Three heuristics:
          1. moments of the background-subtracted histogram
          2. peak bin, half-maximum rise width and a log-linear tail slope
          3. heuristic 2 with tau x0.5, tau x2 and sigma x2
        """
        y = self.y
        centers = self.edges[:-1] + 0.5 * self.width
        background = outer_baseline(y)
        signal = np.clip(y - background, 0.0, None)
        area = float(signal.sum()) or float(y.sum())
        starts: List[np.ndarray] = []

        # 1. moments
        weights = signal if signal.sum() > 0 else y
        mean = float(np.average(centers, weights=weights))
        var = float(np.average((centers - mean) ** 2, weights=weights))
        third = float(np.average((centers - mean) ** 3, weights=weights))
        if self.model == "emg":
            tau = (third / 2.0) ** (1.0 / 3.0) if third > 0 else math.sqrt(max(var, 1.0)) / 2.0
            tau = max(tau, self.width)
            sigma = math.sqrt(max(var - tau**2, (0.5 * self.width) ** 2))
            t0 = mean - tau
        else:
            tau = None
            sigma = math.sqrt(max(var, (0.5 * self.width) ** 2))
            t0 = mean
        starts.append(self._start(t0, sigma, tau, area, background))

        # 2. peak, half-maximum rise, tail slope
        peak = int(np.argmax(signal))
        half = 0.5 * signal[peak]
        below = np.flatnonzero(signal[:peak] < half)
        rise = (peak - below[-1]) * self.width if below.size else self.width
        sigma2 = max(2.0 * rise / FWHM_PER_SIGMA, 0.5 * self.width)
        tau2 = None
        if self.model == "emg":
            tau2 = self._tail_slope(centers, signal, peak, sigma2) or max(sigma2, self.width)
        starts.append(self._start(float(centers[peak]), sigma2, tau2, area, background))

        # 3. perturbations of heuristic 2
        if self.model == "emg":
            variants = [(sigma2, 0.5 * tau2), (sigma2, 2.0 * tau2), (2.0 * sigma2, tau2)]
        else:
            variants = [(0.5 * sigma2, None), (2.0 * sigma2, None)]
        for sig, ta in variants:
            starts.append(self._start(float(centers[peak]), sig, ta, area, background))
        return starts

    def _tail_slope(self, centers, signal, peak: int, sigma: float) -> Optional[float]:
        tail = np.flatnonzero((centers > centers[peak] + 2.0 * sigma) & (signal > 0))
        if tail.size < 3:
            return None
        floor = max(5.0, 1e-3 * signal[peak])
        tail = tail[signal[tail] >= floor]
        if tail.size < 3:
            return None
        slope, _ = np.polyfit(centers[tail], np.log(signal[tail]), 1, w=np.sqrt(signal[tail]))
        if slope >= 0:
            return None
        return -1.0 / slope

    def _start(self, t0, sigma, tau, amplitude, background) -> np.ndarray:
        theta = self.pack(t0, sigma, tau, amplitude, background)
        lower, upper = np.array(self.bounds()).T
        return np.clip(theta, lower, upper)

    # -- optimisation -------------------------------------------------------

    def fit(self, starts: Optional[Sequence[np.ndarray]] = None) -> FitOutcome:
        """
        Multistart L-BFGS-B. The best converged start wins.

        Raises:
            ConvergenceError: if no start converges
        """
        starts = list(starts) if starts is not None else self.heuristic_starts()
        bounds = self.bounds()
        trace: List[str] = []
        best = None
        for index, theta0 in enumerate(starts):
            res = minimize(
                self.deviance_and_gradient,
                theta0,
                jac=True,
                method="L-BFGS-B",
                bounds=bounds,
                options={"maxiter": MAX_ITER, "ftol": 1e-13, "gtol": 1e-8},
            )
            message = res.message.decode() if isinstance(res.message, bytes) else str(res.message)
            converged = self.is_converged(res)
            trace.append(f"start {index}: status={res.status} deviance={res.fun:.6g} ({message})")
            logger.debug(f"{self.model} fit {trace[-1]}")
            if converged and (best is None or res.fun < best.fun):
                best = res
        if best is None:
            raise ConvergenceError(f"{self.model} fit did not converge from {len(starts)} start(s)", trace=trace)
        return self._outcome(best, trace)

    def projected_gradient(self, theta: np.ndarray) -> float:
        """Largest gradient component not blocked by an active bound."""
        _, grad = self.deviance_and_gradient(theta)
        lower, upper = np.array(self.bounds()).T
        return float(np.max(np.abs(np.clip(theta - grad, lower, upper) - theta)))

    def is_converged(self, res) -> bool:
        """
        L-BFGS-B status 0, or status 2 (abnormal line search) at a point
        whose projected gradient is below STALL_GTOL times the deviance.
        """
        if not np.isfinite(res.fun):
            return False
        if res.status == 0:
            return True
        if res.status != 2:
            return False
        return self.projected_gradient(res.x) <= STALL_GTOL * max(1.0, abs(float(res.fun)))

    def _outcome(self, res, trace: List[str]) -> FitOutcome:
        theta = res.x
        p = self._unpack(theta)
        params = {
            "t0": self.h.origin + p["shift"],
            "sigma": p["sigma"],
            "amplitude": p["amplitude"],
            "background": p["background"],
        }
        if self.model == "emg":
            params["tau"] = p["tau"]
        names, cov = self.natural_covariance(theta)
        errors = {name: math.sqrt(max(cov[i, i], 0.0)) for i, name in enumerate(names)}
        if self.fix_sigma is not None:
            errors["sigma"] = 0.0

        at_bound = []
        for name, value, (lo, hi) in zip(self.names, theta, self.bounds()):
            if value - lo <= _BOUND_TOL * max(1.0, abs(lo)) or hi - value <= _BOUND_TOL * max(1.0, abs(hi)):
                at_bound.append(name)

        return FitOutcome(
            params=params,
            errors=errors,
            covariance=cov,
            parameter_names=names,
            deviance=float(res.fun),
            dof=max(self.h.n_bins - len(self.names), 1),
            expected=self.expected(theta),
            n_iterations=int(res.nit),
            at_bound=at_bound,
            trace=trace,
        )


def _decades(y: np.ndarray) -> float:
    populated = y[y > 0]
    if populated.size == 0:
        return 0.0
    return float(math.log10(populated.max() / populated.min()))


@dataclass
class IrfFit:
    """Gaussian IRF fit."""

    t0: float
    sigma: float
    amplitude: float
    background: float
    covariance: np.ndarray
    errors: Dict[str, float]
    fwhm: float
    goodness: float
    decades_of_fit: float
    residuals_by_decade: pd.DataFrame
    degenerate: bool
    expected: np.ndarray
    trace: List[str] = field(default_factory=list)


@dataclass
class LifetimeFit:
    """EMG lifetime fit. `goodness` is the deviance per degree of freedom."""

    tau: float
    t0: float
    sigma_irf: float
    amplitude: float
    background: float
    covariance: np.ndarray
    parameter_names: List[str]
    errors: Dict[str, float]
    goodness: float
    decades_of_fit: float
    sigma_fixed: bool
    at_bound: List[str]
    n_iterations: int
    expected: np.ndarray
    trace: List[str] = field(default_factory=list)


def fit_irf(h: Histogram) -> IrfFit:
    """
    Poisson-MLE fit of a bin-integrated Gaussian plus flat background.

    Raises:
        ValueError: with fewer than 10 populated bins
        ConvergenceError: if every start fails
    """
    engine = PoissonHistogramFit(h, model="gauss")
    out = engine.fit()
    amplitude = out.params["amplitude"]
    # an off-axis peak puts no counts on the histogram
    off_axis = not h.origin <= out.params["t0"] < h.end
    degenerate = off_axis or amplitude < 3.0 * out.errors["amplitude"] or "ln_amplitude" in out.at_bound
    if degenerate:
        logger.warning(f"IRF fit degenerate: amplitude {amplitude:.3g} +- {out.errors['amplitude']:.3g}")
    fit = IrfFit(
        t0=out.params["t0"],
        sigma=out.params["sigma"],
        amplitude=amplitude,
        background=out.params["background"],
        covariance=out.covariance,
        errors=out.errors,
        fwhm=out.params["sigma"] * FWHM_PER_SIGMA,
        goodness=out.deviance / out.dof,
        decades_of_fit=_decades(engine.y),
        residuals_by_decade=residuals_by_decade(engine.y, out.expected),
        degenerate=bool(degenerate),
        expected=out.expected,
        trace=out.trace,
    )
    logger.info(f"IRF fit: FWHM {fit.fwhm:.2f} ps (sigma {fit.sigma:.2f} +- {out.errors['sigma']:.2f})")
    return fit


def fit_lifetime(h: Histogram, fix_sigma: Optional[float] = None) -> LifetimeFit:
    """
    Poisson-MLE fit of a bin-integrated EMG plus flat background.

    Args:
        h: Start-stop histogram
        fix_sigma: IRF sigma from a prior fit_irf; None lets sigma float

    Raises:
        ValueError: with fewer than 10 populated bins
        ConvergenceError: if every start fails
    """
    engine = PoissonHistogramFit(h, model="emg", fix_sigma=fix_sigma)
    out = engine.fit()
    if "ln_tau" in out.at_bound:
        logger.warning(f"Lifetime fit: tau {out.params['tau']:.4g} ps is at a bound")
    fit = LifetimeFit(
        tau=out.params["tau"],
        t0=out.params["t0"],
        sigma_irf=out.params["sigma"],
        amplitude=out.params["amplitude"],
        background=out.params["background"],
        covariance=out.covariance,
        parameter_names=out.parameter_names,
        errors=out.errors,
        goodness=out.deviance / out.dof,
        decades_of_fit=_decades(engine.y),
        sigma_fixed=fix_sigma is not None,
        at_bound=out.at_bound,
        n_iterations=out.n_iterations,
        expected=out.expected,
        trace=out.trace,
    )
    logger.info(f"Lifetime fit: tau {fit.tau:.2f} +- {fit.errors['tau']:.2f} ps")
    return fit
