"""
Command-line interface.

Usage:
    hbt simulate --config run.yaml --out results/
    hbt correlate --timestamps results/timestamps.csv --config run.yaml --out g2/
    hbt irf --histogram irf.csv --out irf/
    hbt lifetime --timestamps tcspc.csv --fix-sigma-ps 28.9 --out lifetime/
    hbt crosstalk --timestamps results/timestamps.csv --out crosstalk/
    hbt plot --histogram coincidences.csv --out coincidences.svg --log
    hbt reproduce fig2 --seed 7 --out fig2/

Exit codes: 0 ok, 2 config, 3 validation, 4 convergence, 5 I/O.
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from ..analysis import acquisition_span, estimate_period
from ..analysis.correlation import cross_correlate
from ..core.histogram import Histogram
from ..core.rng import RngSeed
from ..core.timebase import seconds_to_ps
from ..data import Report, load_run_config, read_histogram_csv, read_timestamps, render_svg
from ..data.run_config import AnalysisConfig, RunConfig
from ..detection import run_tcspc
from ..utils import (
    ConfigError,
    ConvergenceError,
    HbtBenchError,
    LogOperation,
    Logger,
    UnsupportedSpecError,
    get_logger,
    get_settings,
)
from .outputs import RunOutputs
from .reproduce import RECIPES, reproduce, simulate_hbt
from .workflows import crosstalk_workflow, hbt_workflow, irf_workflow, lifetime_workflow, tcspc_histogram

logger = get_logger()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4
EXIT_IO = 5

# AnalysisConfig fields a subcommand flag may override
_ANALYSIS_FLAGS = (
    "bin_width_ps",
    "half_window_ps",
    "peak_window_ps",
    "n_side_peaks",
    "lifetime_bin_width_ps",
    "lifetime_range_ps",
    "crosstalk_bin_width_ps",
    "crosstalk_half_window_ps",
)


# -- helpers ----------------------------------------------------------------


def _load_config(args) -> Optional[RunConfig]:
    path = getattr(args, "config", None)
    if path is None:
        return None
    if getattr(args, "loaded_config", None) is None:
        config = load_run_config(path)
        if getattr(args, "seed", None) is not None:
            config = config.model_copy(update={"seed": args.seed})
        args.loaded_config = config
    return args.loaded_config


def _analysis(args, config: Optional[RunConfig]) -> AnalysisConfig:
    base = config.analysis if config is not None else AnalysisConfig()
    updates = {name: getattr(args, name) for name in _ANALYSIS_FLAGS if getattr(args, name, None) is not None}
    if getattr(args, "recenter", False):
        updates["recenter"] = True
    try:
        return AnalysisConfig(**{**base.model_dump(), **updates})
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ConfigError(error["msg"], key=".".join(str(p) for p in error["loc"])) from exc


def _output_dir(args, config: Optional[RunConfig]) -> Path:
    if args.out is not None:
        return Path(args.out)
    if config is not None:
        return Path(config.output.directory)
    if args.command == "reproduce":
        return Path("results") / args.recipe
    return Path("results")


def _duration_ps(args, config: Optional[RunConfig], a, b) -> int:
    if getattr(args, "duration_s", None) is not None:
        return seconds_to_ps(args.duration_s)
    if config is not None:
        acq = config.acquisition
        if acq.duration_ps is not None:
            return acq.duration_ps
        if config.source.kind != "cw_emitter":
            return acq.n_pulses * config.source.period_ps
    span = acquisition_span(a, b)
    if span <= 0:
        raise ValueError("no clicks to infer the acquisition length from; pass --duration-s")
    return span


def _period_ps(args, config: Optional[RunConfig], a, b, analysis: AnalysisConfig) -> int:
    if args.period_ps is not None:
        return int(args.period_ps)
    if config is not None:
        if config.source.kind == "cw_emitter":
            raise UnsupportedSpecError("a CW source has no repetition period; pass --period-ps")
        return int(config.source.period_ps)
    coarse = cross_correlate(a, b, analysis.bin_width_ps, analysis.half_window_ps)
    period = int(round(estimate_period(coarse)))
    logger.info(f"Estimated repetition period {period} ps from the coincidence histogram")
    return period


def _tcspc_input(args, analysis: AnalysisConfig) -> Histogram:
    if args.histogram is not None:
        return read_histogram_csv(args.histogram)
    start, stop = read_timestamps(args.timestamps, channel_ids=(args.start_channel, args.stop_channel))
    return tcspc_histogram(start, stop, analysis)


# -- subcommands ------------------------------------------------------------


def cmd_simulate(args) -> RunOutputs:
    config = _load_config(args)
    report = Report("Simulation")
    report.add("measurement", config.measurement)
    report.add("source", config.source.kind)
    report.add("seed", config.seed)
    if config.measurement == "hbt":
        run = simulate_hbt(config, args.n_jobs)
        streams = [run.stream_a, run.stream_b]
        report.add("emissions", len(run.truth))
    else:
        acq = config.acquisition
        if acq.n_pulses is None:
            raise ConfigError("lifetime runs are acquired by n_pulses", key="acquisition.n_pulses")
        run = run_tcspc(
            config.source,
            config.detectors.a,
            acq.n_pulses,
            RngSeed(config.seed),
            cable_delay_ps=acq.cable_delay_ps,
            trigger_jitter_fwhm_ps=acq.trigger_jitter_fwhm_ps,
            n_jobs=args.n_jobs,
        )
        streams = [run.start, run.stop]
        report.add("emissions", len(run.truth))
    report.add("duration_ps", run.duration, unit="ps")
    for stream in streams:
        report.add(f"clicks_channel_{stream.channel_id}", len(stream))
    return RunOutputs(name="simulation", report=report, streams=streams)


def cmd_correlate(args) -> RunOutputs:
    config = _load_config(args)
    analysis = _analysis(args, config)
    a, b = read_timestamps(args.timestamps, channel_ids=args.channels)
    duration = _duration_ps(args, config, a, b)
    period = _period_ps(args, config, a, b, analysis)
    dark_a, dark_b = args.dark_a_hz, args.dark_b_hz
    if dark_a is None and dark_b is None and config is not None:
        dark_a, dark_b = config.detectors.a.dark_rate_hz, config.detectors.b.dark_rate_hz
    return hbt_workflow(a, b, analysis, period, duration, dark_a, dark_b)


def cmd_irf(args) -> RunOutputs:
    analysis = _analysis(args, _load_config(args))
    return irf_workflow(_tcspc_input(args, analysis))


def cmd_lifetime(args) -> RunOutputs:
    analysis = _analysis(args, _load_config(args))
    fix_sigma = args.fix_sigma_ps
    irf_outputs = None
    if args.irf_histogram is not None:
        irf_outputs = irf_workflow(read_histogram_csv(args.irf_histogram))
        fix_sigma = irf_outputs.values["sigma_ps"]
    outputs = lifetime_workflow(_tcspc_input(args, analysis), fix_sigma=fix_sigma)
    if irf_outputs is not None:
        outputs.report.add("irf_fwhm_ps", irf_outputs.values["fwhm_ps"], unit="ps")
    return outputs


def cmd_crosstalk(args) -> RunOutputs:
    config = _load_config(args)
    analysis = _analysis(args, config)
    a, b = read_timestamps(args.timestamps, channel_ids=args.channels)
    duration = seconds_to_ps(args.duration_s) if args.duration_s is not None else None
    return crosstalk_workflow(a, b, analysis, duration)


def cmd_plot(args) -> None:
    """Render one histogram file; writes the SVG itself instead of a result directory."""
    h = read_histogram_csv(args.histogram)
    render_svg(h, args.out, annotation=args.annotation, log_scale=args.log, title=args.title)


def cmd_reproduce(args) -> RunOutputs:
    return reproduce(args.recipe, seed=args.seed, n_jobs=args.n_jobs)


# -- parser -----------------------------------------------------------------


def _add_analysis_flags(parser: argparse.ArgumentParser, *groups: str):
    if "hbt" in groups:
        parser.add_argument("--bin-width-ps", type=int, dest="bin_width_ps")
        parser.add_argument("--half-window-ps", type=int, dest="half_window_ps")
        parser.add_argument("--peak-window-ps", type=int, dest="peak_window_ps")
        parser.add_argument("--n-side-peaks", type=int, dest="n_side_peaks")
        parser.add_argument("--recenter", action="store_true", help="Re-center peak windows on local maxima")
    if "tcspc" in groups:
        parser.add_argument("--bin-width-ps", type=int, dest="lifetime_bin_width_ps")
        parser.add_argument("--range-ps", type=int, dest="lifetime_range_ps")
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--timestamps", help="CSV with start and stop channels")
        source.add_argument("--histogram", help="Start-stop histogram CSV")
        parser.add_argument("--start-channel", type=int, default=0)
        parser.add_argument("--stop-channel", type=int, default=1)
    if "crosstalk" in groups:
        parser.add_argument("--bin-width-ps", type=int, dest="crosstalk_bin_width_ps")
        parser.add_argument("--half-window-ps", type=int, dest="crosstalk_half_window_ps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hbt", description="HBT single-photon bench simulator and analysis")
    parser.add_argument("--log-level", help="Override HBT_LOG_LEVEL")
    parser.add_argument("--log-format", choices=["text", "json"], help="Override HBT_LOG_FORMAT")
    parser.add_argument("--n-jobs", type=int, default=None, help="joblib workers (default HBT_N_JOBS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Simulate an acquisition and write timestamps")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("correlate", help="Coincidence histogram and g2(0)")
    p.add_argument("--timestamps", required=True)
    p.add_argument("--config")
    p.add_argument("--channels", type=int, nargs=2, default=[0, 1])
    p.add_argument("--period-ps", type=int)
    p.add_argument("--duration-s", type=float)
    p.add_argument("--dark-a-hz", type=float)
    p.add_argument("--dark-b-hz", type=float)
    p.add_argument("--out")
    _add_analysis_flags(p, "hbt")
    p.set_defaults(handler=cmd_correlate)

    p = sub.add_parser("irf", help="Fit a Gaussian instrument response")
    p.add_argument("--config")
    p.add_argument("--out")
    _add_analysis_flags(p, "tcspc")
    p.set_defaults(handler=cmd_irf)

    p = sub.add_parser("lifetime", help="Fit an IRF-convolved exponential decay")
    p.add_argument("--config")
    p.add_argument("--out")
    sigma = p.add_mutually_exclusive_group()
    sigma.add_argument("--fix-sigma-ps", type=float, help="Hold the IRF sigma fixed")
    sigma.add_argument("--irf-histogram", help="Fit this IRF histogram first and hold its sigma")
    _add_analysis_flags(p, "tcspc")
    p.set_defaults(handler=cmd_lifetime)

    p = sub.add_parser("crosstalk", help="Flatness test of the cross-correlation")
    p.add_argument("--timestamps", required=True)
    p.add_argument("--config")
    p.add_argument("--channels", type=int, nargs=2, default=[0, 1])
    p.add_argument("--duration-s", type=float)
    p.add_argument("--out")
    _add_analysis_flags(p, "crosstalk")
    p.set_defaults(handler=cmd_crosstalk)

    p = sub.add_parser("plot", help="Render a histogram CSV as SVG")
    p.add_argument("--histogram", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log", action="store_true")
    p.add_argument("--title")
    p.add_argument("--annotation")
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("reproduce", help="Run a reference reproduction recipe")
    p.add_argument("recipe", choices=sorted(RECIPES))
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_reproduce)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, (ValueError, UnsupportedSpecError, OverflowError, HbtBenchError)):
        return EXIT_VALIDATION
    raise exc


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand and return its exit code.

    Nothing is written unless every computation of the command succeeded.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = get_settings()
        Logger.from_settings(settings, log_level=args.log_level, log_format=args.log_format)
        with LogOperation(args.command):
            outputs = args.handler(args)
            if outputs is not None:
                outputs.write(_output_dir(args, _load_config(args)))
    except Exception as exc:  # noqa: BLE001
        code = _exit_code(exc)
        logger.error(f"{type(exc).__name__}: {exc}")
        return code
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())
