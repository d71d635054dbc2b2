"""
Flatness test of the cross-correlation between two channels.

Without cross talk, clicks on two independent channels give a coincidence
histogram whose expectation per bin is n_a * n_b * w * (T - |d|) / T^2.
Any bin far above that points to electrical or optical coupling.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import stats

from ..core.histogram import Histogram
from ..utils import get_logger
from .correlation import acquisition_span, cross_correlate

logger = get_logger()

FLAG_SIGMA = 5.0
MIN_EXPECTED_PER_BIN = 100.0


@dataclass
class CrosstalkReport:
    """Outcome of crosstalk_test. verdict is None when there is nothing to test."""

    chi_square: float
    dof: int
    p_value: float
    expected_per_bin: float
    flagged_bins: List[int] = field(default_factory=list)
    excess_sigma: Optional[np.ndarray] = None
    underpowered: bool = False
    warnings: List[str] = field(default_factory=list)
    verdict: Optional[str] = None
    histogram: Optional[Histogram] = None


def crosstalk_test(a, b, bin_width: int, half_window: int, duration_ps: Optional[int] = None) -> CrosstalkReport:
    """
    Chi-square of the cross-correlation against the flat accidental expectation.

    Args:
        a, b: Click streams of the two channels
        bin_width: Bin width in ps
        half_window: Half width of the delay axis in ps
        duration_ps: Acquisition length; defaults to the span of the clicks

    Returns:
        CrosstalkReport. Bins with |z| > 5 are flagged by their left edge
        in ps. Underpowered input (expected < 100 per bin) is reported in
        warnings, not enforced.
    """
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        message = "empty stream: no coincidences to test"
        logger.warning(f"Cross-talk test underpowered ({message})")
        return CrosstalkReport(
            chi_square=float("nan"),
            dof=0,
            p_value=float("nan"),
            expected_per_bin=0.0,
            underpowered=True,
            warnings=[message],
        )

    span = acquisition_span(a, b, duration_ps)
    hist = cross_correlate(a, b, bin_width, half_window)
    delays = np.abs(hist.centers())
    expected = n_a * n_b * hist.bin_width * np.clip(span - delays, 0.0, None) / float(span) ** 2

    warnings: List[str] = []
    underpowered = bool(expected.min() < MIN_EXPECTED_PER_BIN)
    if underpowered:
        warnings.append(
            f"expected {expected.min():.3g} coincidences per bin (< {MIN_EXPECTED_PER_BIN:g}); test has little power"
        )
        logger.warning(f"Cross-talk test underpowered: {warnings[-1]}")

    observed = hist.counts.astype(np.float64)
    usable = expected > 0
    excess = np.zeros_like(observed)
    excess[usable] = (observed[usable] - expected[usable]) / np.sqrt(expected[usable])
    chi_square = float(np.sum(excess[usable] ** 2))
    dof = int(np.count_nonzero(usable))
    p_value = float(stats.chi2.sf(chi_square, dof)) if dof else float("nan")

    flagged = [int(edge) for edge in hist.edges()[:-1][np.abs(excess) > FLAG_SIGMA]]
    verdict = "crosstalk" if flagged else "flat"
    logger.info(f"Cross-talk test: chi2={chi_square:.1f}/{dof}, p={p_value:.3g}, {len(flagged)} flagged bin(s)")
    return CrosstalkReport(
        chi_square=chi_square,
        dof=dof,
        p_value=p_value,
        expected_per_bin=float(expected.mean()),
        flagged_bins=flagged,
        excess_sigma=excess,
        underpowered=underpowered,
        warnings=warnings,
        verdict=verdict,
        histogram=hist,
    )
