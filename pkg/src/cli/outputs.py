"""
Deferred output writing.

Commands collect everything they produce in a RunOutputs and write it in
one pass once every computation has succeeded, so a failing run leaves
no partial files behind.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..core.histogram import Histogram
from ..core.streams import TimestampStream
from ..data import Report, render_svg, write_histogram_csv, write_timestamps
from ..utils import get_logger

logger = get_logger()


@dataclass
class PlotSpec:
    histogram: Histogram
    model_curve: Optional[np.ndarray] = None
    annotation: Optional[str] = None
    log_scale: bool = False
    title: Optional[str] = None
    xlabel: str = "Delay (ps)"


@dataclass
class RunOutputs:
    """Files one command or recipe will write, keyed by file stem."""

    name: str
    report: Report
    histograms: Dict[str, Histogram] = field(default_factory=dict)
    plots: Dict[str, PlotSpec] = field(default_factory=dict)
    streams: Sequence[TimestampStream] = ()
    values: Dict[str, float] = field(default_factory=dict)

    def write(self, directory: Union[str, Path]) -> List[Path]:
        """
        Write the report, histograms, plots and timestamps under directory.

        Raises:
            OSError: if the directory cannot be created or written
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written: List[Path] = list(self.report.write(directory, self.name))
        for stem, hist in self.histograms.items():
            written.append(write_histogram_csv(hist, directory / f"{stem}.csv"))
        for stem, plot in self.plots.items():
            written.append(
                render_svg(
                    plot.histogram,
                    directory / f"{stem}.svg",
                    model_curve=plot.model_curve,
                    annotation=plot.annotation,
                    log_scale=plot.log_scale,
                    xlabel=plot.xlabel,
                    title=plot.title,
                )
            )
        if self.streams:
            written.append(write_timestamps(self.streams, directory / "timestamps.csv"))
        logger.info(f"Wrote {len(written)} file(s) to {directory}")
        return written


def merge_outputs(name: str, title: str, parts: Sequence[RunOutputs]) -> RunOutputs:
    """Combine several outputs into one, prefixing report keys with each part's name."""
    report = Report(title)
    merged = RunOutputs(name=name, report=report)
    for part in parts:
        for key, text in part.report.values().items():
            if key != "schema_version":
                report.add(f"{part.name}.{key}", text)
        merged.histograms.update({f"{part.name}_{k}": v for k, v in part.histograms.items()})
        merged.plots.update({f"{part.name}_{k}": v for k, v in part.plots.items()})
        merged.values.update({f"{part.name}.{k}": v for k, v in part.values.items()})
    return merged
