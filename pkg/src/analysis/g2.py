"""
g2(0) estimation from integrated peak areas, with dark-count correction.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np

from ..core.timebase import PS_PER_SECOND
from ..utils import get_logger
from .peaks import PeakAreas

logger = get_logger()

# Below this many center counts the Poisson term uses max(center, 1)
SMALL_COUNT = 10


@dataclass(frozen=True)
class G2Result:
    """g2(0) with its 1-sigma Poisson uncertainty, optionally dark-corrected."""

    g2_zero: float
    sigma: float
    center_area: int
    side_areas: Tuple[int, ...]
    g2_zero_corrected: Optional[float] = None
    sigma_corrected: Optional[float] = None
    accidentals: Optional[float] = None
    correction_inputs: Dict[str, float] = field(default_factory=dict)

    @property
    def mean_side(self) -> float:
        return float(np.mean(self.side_areas))

    @property
    def side_total(self) -> int:
        return int(np.sum(self.side_areas))


def _center_eff(center: int) -> float:
    return float(max(center, 1)) if center < SMALL_COUNT else float(center)


def g2_zero(p: PeakAreas) -> G2Result:
    """
    Center area over mean side area.

    sigma = (c_eff / mean) * sqrt(1/c_eff + 1/sum(side)), where c_eff is the
    center area, floored at 1 when it is below SMALL_COUNT.

    Raises:
        ValueError: with fewer than two side peaks or a zero side mean
    """
    sides = p.side_array()
    if sides.size < 2:
        raise ValueError(f"need at least two side peaks, got {sides.size}")
    total = int(sides.sum())
    if total <= 0:
        raise ValueError("mean side-peak area is zero; g2(0) is undefined")
    mean = total / sides.size
    center = int(p.center_area)
    c_eff = _center_eff(center)
    sigma = (c_eff / mean) * math.sqrt(1.0 / c_eff + 1.0 / total)
    return G2Result(
        g2_zero=center / mean,
        sigma=sigma,
        center_area=center,
        side_areas=tuple(int(v) for v in sides),
    )


def accidental_area(
    dark_a: float, dark_b: float, singles_a: float, singles_b: float, t_acq_s: float, window_ps: float
) -> float:
    """Expected accidental coincidences per window involving at least one dark click."""
    window_s = window_ps / PS_PER_SECOND
    return (dark_a * singles_b + singles_a * dark_b - dark_a * dark_b) * window_s * t_acq_s


def correct_darks(
    r: G2Result,
    dark_a: float,
    dark_b: float,
    singles_a: float,
    singles_b: float,
    t_acq_s: float,
    window_ps: float,
    n_side: Optional[int] = None,
) -> G2Result:
    """
    Subtract dark-count accidentals from the center and side areas.

    N_acc = (d_a*s_b + s_a*d_b - d_a*d_b) * window * T
    g2_corr = max(0, center - N_acc) / (mean_side - N_acc)

    The uncertainty treats N_acc as Poisson-distributed alongside the
    center and side counts.

    Raises:
        ValueError: if a rate is negative, darks exceed singles, N_acc
            reaches the mean side area, or n_side disagrees with the
            side peaks of r
    """
    for name, dark, singles in (("a", dark_a, singles_a), ("b", dark_b, singles_b)):
        if dark < 0 or singles < dark:
            raise ValueError(f"channel {name}: need singles >= darks >= 0, got {singles} and {dark}")
    if t_acq_s < 0 or window_ps <= 0:
        raise ValueError("acquisition time must be non-negative and window positive")

    n = len(r.side_areas)
    if n_side is not None and int(n_side) != n:
        raise ValueError(f"n_side={n_side} does not match the {n} integrated side peaks")
    total = r.side_total
    mean = total / n
    n_acc = accidental_area(dark_a, dark_b, singles_a, singles_b, t_acq_s, window_ps)
    inputs = {
        "dark_a_hz": float(dark_a),
        "dark_b_hz": float(dark_b),
        "singles_a_hz": float(singles_a),
        "singles_b_hz": float(singles_b),
        "t_acq_s": float(t_acq_s),
        "window_ps": float(window_ps),
    }
    if n_acc == 0:
        return replace(
            r,
            g2_zero_corrected=r.g2_zero,
            sigma_corrected=r.sigma,
            accidentals=0.0,
            correction_inputs=inputs,
        )
    if n_acc >= mean:
        raise ValueError(f"accidentals {n_acc:.4g} reach the mean side area {mean:.4g}; correction invalid")

    numerator = max(0.0, r.center_area - n_acc)
    denominator = mean - n_acc
    c_eff = _center_eff(r.center_area)
    variance = (c_eff + n_acc) / denominator**2 + numerator**2 * (total / n**2 + n_acc) / denominator**4
    corrected = numerator / denominator
    logger.debug(f"Dark correction: N_acc={n_acc:.4g}, g2 {r.g2_zero:.4g} -> {corrected:.4g}")
    return replace(
        r,
        g2_zero_corrected=corrected,
        sigma_corrected=math.sqrt(variance),
        accidentals=n_acc,
        correction_inputs=inputs,
    )
