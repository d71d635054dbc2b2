"""
Analytic coincidence expectations for pulsed sources.

The quantum-dot case is an exact enumeration over photon number per pulse
({0, 1, 2}) and over each photon's fate (arm A and detected, arm B and
detected, lost). The laser case uses Poisson thinning: the detected counts
in the two arms are independent Poisson variables, so g2(0) = 1.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from scipy import integrate, optimize
from scipy.special import ndtr

from ..core.timebase import jitter_sigma
from ..utils import UnsupportedSpecError, get_logger
from .specs import CwEmitterSpec, LaserPulsedSpec, QdPulsedSpec

logger = get_logger()

_FATES = ("a", "b", "lost")


@dataclass(frozen=True)
class CoincidenceExpectation:
    """
    Expected coincidences per pulse.

    `center_per_pulse` and `side_per_pulse` are the full peak areas;
    the `*_in_window` values are those areas times the probability that a
    pair delay falls inside +-window/2 of the peak position.
    """

    center_per_pulse: float
    side_per_pulse: float
    g2_zero: float
    containment_center: float
    containment_side: float
    click_prob_a: float
    click_prob_b: float

    @property
    def center_in_window(self) -> float:
        return self.center_per_pulse * self.containment_center

    @property
    def side_in_window(self) -> float:
        return self.side_per_pulse * self.containment_side

    @property
    def g2_zero_windowed(self) -> float:
        if self.side_in_window == 0:
            return math.nan
        return self.center_in_window / self.side_in_window


def _laplace_gauss_containment(half_width: float, tau: float, sigma: float) -> float:
    """P(|L + G| <= half_width) with L ~ Laplace(0, tau), G ~ N(0, sigma)."""
    if half_width is None or math.isinf(half_width):
        return 1.0
    if tau <= 0 and sigma <= 0:
        return 1.0
    if tau <= 0:
        return float(2.0 * ndtr(half_width / sigma) - 1.0)
    if sigma <= 0:
        return 1.0 - math.exp(-half_width / tau)

    def integrand(x: float) -> float:
        inside = ndtr((half_width - x) / sigma) - ndtr((-half_width - x) / sigma)
        return math.exp(-x / tau) / tau * inside

    # Symmetric in x; integrate one side with the exponential density
    value, _ = integrate.quad(integrand, 0.0, math.inf, limit=200)
    return float(min(1.0, max(0.0, value)))


def _qd_moments(spec: QdPulsedSpec, eta_a: float, eta_b: float, merge_same_arm: bool) -> Tuple[float, float, float]:
    """(center per pulse, mean clicks A per pulse, mean clicks B per pulse)."""
    photon_number = {
        0: 1.0 - spec.p_emit,
        1: spec.p_emit * (1.0 - spec.p_two),
        2: spec.p_emit * spec.p_two,
    }
    fate_prob = {"a": 0.5 * eta_a, "b": 0.5 * eta_b}
    fate_prob["lost"] = 1.0 - fate_prob["a"] - fate_prob["b"]

    center = mean_a = mean_b = 0.0
    for n, p_n in photon_number.items():
        if p_n == 0:
            continue
        for fates in itertools.product(_FATES, repeat=n):
            p = p_n * math.prod(fate_prob[f] for f in fates)
            clicks_a = fates.count("a")
            clicks_b = fates.count("b")
            if merge_same_arm:
                clicks_a = min(clicks_a, 1)
                clicks_b = min(clicks_b, 1)
            center += p * clicks_a * clicks_b
            mean_a += p * clicks_a
            mean_b += p * clicks_b
    return center, mean_a, mean_b


def _laser_moments(spec: LaserPulsedSpec, eta_a: float, eta_b: float, merge_same_arm: bool) -> Tuple[float, float, float]:
    mu_a = spec.mean_photon_number * 0.5 * eta_a
    mu_b = spec.mean_photon_number * 0.5 * eta_b
    if merge_same_arm:
        mean_a = -math.expm1(-mu_a)
        mean_b = -math.expm1(-mu_b)
    else:
        mean_a, mean_b = mu_a, mu_b
    # Thinned Poisson counts are independent, so the center peak is the product
    return mean_a * mean_b, mean_a, mean_b


def expected_coincidence_rates(
    source,
    eta_a: float,
    eta_b: float,
    window_ps: Optional[float] = None,
    jitter_fwhm_a_ps: float = 0.0,
    jitter_fwhm_b_ps: float = 0.0,
    merge_same_arm: bool = True,
) -> CoincidenceExpectation:
    """
    Expected center and side peak coincidences per pulse.

    Args:
        source: QdPulsedSpec or LaserPulsedSpec (or a source wrapping one)
        eta_a: Lumped detection efficiency of arm A (splitter not included)
        eta_b: Lumped detection efficiency of arm B
        window_ps: Full integration window; None counts whole peaks
        jitter_fwhm_a_ps: Detector A jitter, used for window containment
        jitter_fwhm_b_ps: Detector B jitter
        merge_same_arm: Several photons in one arm within a pulse give one
            click (dead time longer than the emission spread)

    Returns:
        CoincidenceExpectation

    Raises:
        UnsupportedSpecError: for CW sources
    """
    spec = getattr(source, "spec", source)
    for eta in (eta_a, eta_b):
        if not 0 <= eta <= 1:
            raise ValueError(f"efficiency must be in [0, 1], got {eta}")
    half = None if window_ps is None else 0.5 * float(window_ps)
    detector_var = jitter_sigma(jitter_fwhm_a_ps) ** 2 + jitter_sigma(jitter_fwhm_b_ps) ** 2

    if isinstance(spec, QdPulsedSpec):
        center, mean_a, mean_b = _qd_moments(spec, eta_a, eta_b, merge_same_arm)
        exc_var = jitter_sigma(spec.excitation_jitter_fwhm_ps) ** 2
        tau = spec.lifetime_ps
        containment_center = _laplace_gauss_containment(half, tau, math.sqrt(detector_var))
        containment_side = _laplace_gauss_containment(half, tau, math.sqrt(detector_var + 2 * exc_var))
    elif isinstance(spec, LaserPulsedSpec):
        center, mean_a, mean_b = _laser_moments(spec, eta_a, eta_b, merge_same_arm)
        pulse_var = jitter_sigma(spec.pulse_jitter_fwhm_ps) ** 2
        containment_center = _laplace_gauss_containment(half, 0.0, math.sqrt(detector_var))
        containment_side = _laplace_gauss_containment(half, 0.0, math.sqrt(detector_var + 2 * pulse_var))
    elif isinstance(spec, CwEmitterSpec):
        raise UnsupportedSpecError("no pulse structure: coincidence peaks are undefined for a CW source")
    else:
        raise UnsupportedSpecError(f"unsupported source spec {type(spec).__name__}")

    side = mean_a * mean_b
    g2 = center / side if side > 0 else math.nan
    return CoincidenceExpectation(
        center_per_pulse=center,
        side_per_pulse=side,
        g2_zero=g2,
        containment_center=containment_center,
        containment_side=containment_side,
        click_prob_a=mean_a,
        click_prob_b=mean_b,
    )


def solve_p_two(
    target_g2: float,
    p_emit: float,
    eta_a: float,
    eta_b: float,
    merge_same_arm: bool = True,
    base: Optional[QdPulsedSpec] = None,
) -> float:
    """
    Two-photon probability that gives the requested analytic g2(0).

    Brent root over p_two in [0, 1].
    """
    base = base or QdPulsedSpec()

    def g2_of(p_two: float) -> float:
        spec = base.model_copy(update={"p_emit": p_emit, "p_two": p_two})
        return expected_coincidence_rates(spec, eta_a, eta_b, merge_same_arm=merge_same_arm).g2_zero

    low, high = g2_of(0.0), g2_of(1.0)
    if not low <= target_g2 <= high:
        raise ValueError(f"g2 target {target_g2} outside reachable range [{low:.4g}, {high:.4g}]")
    p_two = optimize.brentq(lambda p: g2_of(p) - target_g2, 0.0, 1.0, xtol=1e-18, rtol=1e-12)
    logger.debug(f"p_two={p_two:.6g} gives analytic g2(0)={target_g2}")
    return float(p_two)
