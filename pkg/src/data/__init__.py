"""Run configuration, file formats, reports and plots."""

from .histogram_io import read_histogram_csv, write_histogram_csv
from .plotting import render_svg
from .reports import Report, parse_report
from .run_config import RunConfig, load_preset, load_run_config, parse_config
from .timestamps_io import read_timestamps, write_timestamps

__all__ = [
    "RunConfig",
    "parse_config",
    "load_preset",
    "load_run_config",
    "read_timestamps",
    "write_timestamps",
    "read_histogram_csv",
    "write_histogram_csv",
    "render_svg",
    "Report",
    "parse_report",
]
