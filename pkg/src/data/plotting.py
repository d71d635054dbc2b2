"""
Deterministic SVG rendering of histograms.

The same histogram always produces the same bytes: the SVG id salt is
fixed and the date metadata is suppressed.
"""

from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..core.histogram import Histogram  # noqa: E402

SVG_SALT = "hbt-bench"


def render_svg(
    h: Histogram,
    path: Union[str, Path],
    model_curve: Optional[np.ndarray] = None,
    annotation: Optional[str] = None,
    log_scale: bool = False,
    xlabel: str = "Delay (ps)",
    title: Optional[str] = None,
) -> Path:
    """
    Render a histogram as an SVG file.

    Args:
        h: Histogram to draw as steps
        path: Output file
        model_curve: Model value per bin, drawn at the bin centers
        annotation: Text placed in the upper right corner
        log_scale: Logarithmic count axis
        xlabel: Label of the delay axis
        title: Optional plot title
    """
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": SVG_SALT, "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        try:
            ax.stairs(h.counts, h.edges(), color="tab:blue", label="data")
            if model_curve is not None:
                curve = np.asarray(model_curve, dtype=np.float64)
                if curve.shape != h.counts.shape:
                    raise ValueError(f"model curve has {curve.size} points for {h.n_bins} bins")
                ax.plot(h.centers(), curve, color="tab:red", linewidth=1.2, label="model")
                ax.legend(loc="upper left", frameon=False)
            if log_scale:
                ax.set_yscale("log")
                ax.set_ylim(bottom=0.5)
            if annotation:
                ax.text(0.98, 0.95, annotation, transform=ax.transAxes, ha="right", va="top", family="monospace")
            ax.set_xlabel(xlabel)
            ax.set_ylabel("Counts")
            if title:
                ax.set_title(title)
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return path
