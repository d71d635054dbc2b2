"""
Correlator: coincidence histograms, peak areas, g2(0) and the cross-talk test.
"""

from .correlation import (
    acquisition_span,
    cross_correlate,
    folded_side_peak,
    pair_delays,
    singles_rate,
    start_stop_correlate,
)
from .crosstalk_test import CrosstalkReport, crosstalk_test
from .g2 import G2Result, accidental_area, correct_darks, g2_zero
from .peaks import PeakAreas, estimate_period, integrate_peaks
from .replication import replicate

__all__ = [
    "cross_correlate",
    "start_stop_correlate",
    "folded_side_peak",
    "pair_delays",
    "singles_rate",
    "acquisition_span",
    "PeakAreas",
    "integrate_peaks",
    "estimate_period",
    "G2Result",
    "g2_zero",
    "correct_darks",
    "accidental_area",
    "CrosstalkReport",
    "crosstalk_test",
    "replicate",
]
