"""Command-line entry point and reproduction recipes."""

from .main import build_parser, main, run_cli
from .outputs import PlotSpec, RunOutputs
from .reproduce import reproduce, reproduce_fig2, reproduce_fig3, reproduce_fig4

__all__ = [
    "run_cli",
    "build_parser",
    "main",
    "RunOutputs",
    "PlotSpec",
    "reproduce",
    "reproduce_fig2",
    "reproduce_fig3",
    "reproduce_fig4",
]
