"""
Detection chain: beamsplitter, detector model, cross talk and the bench
pipelines that compose them.
"""

from .beamsplitter import beamsplit
from .crosstalk import inject_crosstalk, inject_crosstalk_tagged
from .detector import AFTERPULSE, CROSSTALK, DARK, dead_time_mask, detect, detect_tagged, identity_detector
from .pipeline import HbtRun, TcspcRun, irf_source, run_hbt, run_tcspc
from .specs import CrosstalkSpec, DetectorSpec

__all__ = [
    "DetectorSpec",
    "CrosstalkSpec",
    "beamsplit",
    "detect",
    "detect_tagged",
    "dead_time_mask",
    "identity_detector",
    "inject_crosstalk",
    "inject_crosstalk_tagged",
    "DARK",
    "AFTERPULSE",
    "CROSSTALK",
    "HbtRun",
    "TcspcRun",
    "run_hbt",
    "run_tcspc",
    "irf_source",
]
