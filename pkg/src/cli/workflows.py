"""
Analysis workflows shared by the CLI subcommands and the reproduction recipes.

Each workflow takes click streams (or histograms) plus the analysis
settings and returns a RunOutputs holding its report, histograms and plots.
"""

import math
from typing import Optional

from ..analysis import (
    correct_darks,
    cross_correlate,
    crosstalk_test,
    folded_side_peak,
    g2_zero,
    integrate_peaks,
    start_stop_correlate,
)
from ..core.histogram import Histogram
from ..core.streams import TimestampStream
from ..core.timebase import PS_PER_SECOND
from ..data import Report
from ..data.run_config import AnalysisConfig
from ..models import fit_irf, fit_lifetime, fwhm_of_histogram
from ..utils import get_logger
from .outputs import PlotSpec, RunOutputs

logger = get_logger()


def hbt_workflow(
    stream_a: TimestampStream,
    stream_b: TimestampStream,
    analysis: AnalysisConfig,
    period_ps: int,
    duration_ps: int,
    dark_a_hz: Optional[float] = None,
    dark_b_hz: Optional[float] = None,
    name: str = "g2",
) -> RunOutputs:
    """
    Coincidence histogram, peak areas and g2(0).

    The dark-count correction runs when both dark rates are given.
    """
    hist = cross_correlate(stream_a, stream_b, analysis.bin_width_ps, analysis.half_window_ps)
    peaks = integrate_peaks(hist, period_ps, analysis.peak_window_ps, analysis.n_side_peaks, analysis.recenter)
    result = g2_zero(peaks)

    t_acq_s = duration_ps / PS_PER_SECOND
    singles_a = stream_a.rate_hz(duration_ps)
    singles_b = stream_b.rate_hz(duration_ps)
    if dark_a_hz is not None and dark_b_hz is not None:
        result = correct_darks(
            result,
            dark_a_hz,
            dark_b_hz,
            singles_a,
            singles_b,
            t_acq_s,
            analysis.peak_window_ps,
        )

    report = Report("Second-order correlation g2(0)")
    report.add("period_ps", int(period_ps), unit="ps")
    report.add("acquisition_s", t_acq_s, unit="s")
    report.add("singles_a_hz", singles_a, unit="Hz")
    report.add("singles_b_hz", singles_b, unit="Hz")
    report.add("bin_width_ps", hist.bin_width, unit="ps")
    report.add("peak_window_ps", peaks.window, unit="ps")
    report.add("center_area", result.center_area)
    report.add("mean_side_area", result.mean_side)
    report.add("g2_zero", result.g2_zero)
    report.add("g2_zero_sigma", result.sigma)
    report.add("accidentals", result.accidentals)
    report.add("g2_zero_corrected", result.g2_zero_corrected)
    report.add("g2_zero_corrected_sigma", result.sigma_corrected)

    annotation = f"g2(0) = {result.g2_zero:.3f} ± {result.sigma:.3f}"
    if result.g2_zero_corrected is not None:
        annotation += f"\ncorrected {result.g2_zero_corrected:.3f} ± {result.sigma_corrected:.3f}"
    logger.info(f"{name}: {annotation.replace(chr(10), ', ')}")
    return RunOutputs(
        name=name,
        report=report,
        histograms={"coincidences": hist},
        plots={"coincidences": PlotSpec(hist, annotation=annotation, title="Coincidence histogram")},
        values={
            "g2_zero": result.g2_zero,
            "sigma": result.sigma,
            "g2_zero_corrected": result.g2_zero_corrected if result.g2_zero_corrected is not None else math.nan,
            "sigma_corrected": result.sigma_corrected if result.sigma_corrected is not None else math.nan,
        },
    )


def fold_workflow(
    stream_a: TimestampStream,
    stream_b: TimestampStream,
    analysis: AnalysisConfig,
    period_ps: int,
    name: str = "side_peak",
) -> RunOutputs:
    """Width of the side peaks folded onto one delay axis."""
    folded = folded_side_peak(
        stream_a,
        stream_b,
        period_ps,
        analysis.fold_bin_width_ps,
        analysis.n_side_peaks,
        analysis.fold_half_width_ps,
    )
    fwhm = fwhm_of_histogram(folded)
    report = Report("Folded side peak")
    report.add("side_peak_fwhm_ps", fwhm, label="Side peak FWHM", unit="ps")
    report.add("folded_pairs", folded.total)
    return RunOutputs(
        name=name,
        report=report,
        histograms={"folded": folded},
        plots={"folded": PlotSpec(folded, annotation=f"FWHM = {fwhm} ps", title="Folded side peaks")},
        values={"fwhm_ps": float(fwhm)},
    )


def tcspc_histogram(start: TimestampStream, stop: TimestampStream, analysis: AnalysisConfig) -> Histogram:
    return start_stop_correlate(start, stop, analysis.lifetime_bin_width_ps, analysis.lifetime_range_ps)


def irf_workflow(h: Histogram, name: str = "irf") -> RunOutputs:
    fit = fit_irf(h)
    report = Report("Instrument response")
    report.add("irf_fwhm_ps", fit.fwhm, label="IRF FWHM", unit="ps")
    report.add("irf_sigma_ps", fit.sigma, unit="ps")
    report.add("irf_sigma_error_ps", fit.errors["sigma"], unit="ps")
    report.add("irf_t0_ps", fit.t0, unit="ps")
    report.add("background", fit.background)
    report.add("goodness", fit.goodness, label="Deviance / dof")
    report.add("decades_of_fit", fit.decades_of_fit)
    report.add("degenerate", fit.degenerate)
    for row in fit.residuals_by_decade.itertuples(index=False):
        report.add(f"residual_decade_{row.decade}", row.mean_residual, label=f"Mean residual, decade {row.decade}")
        report.add(f"bins_decade_{row.decade}", row.n_bins)
    return RunOutputs(
        name=name,
        report=report,
        histograms={"irf": h},
        plots={
            "irf": PlotSpec(
                h,
                model_curve=fit.expected,
                annotation=f"FWHM = {fit.fwhm:.1f} ps",
                log_scale=True,
                title="Instrument response",
                xlabel="Start-stop delay (ps)",
            )
        },
        values={"fwhm_ps": fit.fwhm, "sigma_ps": fit.sigma, "decades_of_fit": fit.decades_of_fit},
    )


def lifetime_workflow(h: Histogram, fix_sigma: Optional[float] = None, name: str = "lifetime") -> RunOutputs:
    fit = fit_lifetime(h, fix_sigma=fix_sigma)
    report = Report("Lifetime")
    report.add("tau_ps", fit.tau, label="Lifetime", unit="ps")
    report.add("tau_error_ps", fit.errors["tau"], unit="ps")
    report.add("t0_ps", fit.t0, unit="ps")
    report.add("sigma_irf_ps", fit.sigma_irf, unit="ps")
    report.add("sigma_fixed", fit.sigma_fixed)
    report.add("amplitude", fit.amplitude)
    report.add("background", fit.background)
    report.add("goodness", fit.goodness, label="Deviance / dof")
    report.add("decades_of_fit", fit.decades_of_fit)
    report.add("at_bound", ",".join(fit.at_bound) or "none")
    report.add("iterations", fit.n_iterations)
    return RunOutputs(
        name=name,
        report=report,
        histograms={"decay": h},
        plots={
            "decay": PlotSpec(
                h,
                model_curve=fit.expected,
                annotation=f"tau = {fit.tau:.1f} ± {fit.errors['tau']:.1f} ps",
                log_scale=True,
                title="Start-stop histogram",
                xlabel="Start-stop delay (ps)",
            )
        },
        values={"tau_ps": fit.tau, "tau_error_ps": fit.errors["tau"]},
    )


def crosstalk_workflow(
    stream_a: TimestampStream,
    stream_b: TimestampStream,
    analysis: AnalysisConfig,
    duration_ps: Optional[int] = None,
    name: str = "crosstalk",
) -> RunOutputs:
    result = crosstalk_test(
        stream_a, stream_b, analysis.crosstalk_bin_width_ps, analysis.crosstalk_half_window_ps, duration_ps
    )
    report = Report("Cross-talk test")
    report.add("verdict", result.verdict)
    report.add("chi_square", result.chi_square)
    report.add("dof", result.dof)
    report.add("p_value", result.p_value)
    report.add("expected_per_bin", result.expected_per_bin)
    report.add("flagged_bins_ps", ",".join(str(b) for b in result.flagged_bins) or "none")
    report.add("underpowered", result.underpowered)
    outputs = RunOutputs(name=name, report=report, values={"p_value": result.p_value})
    if result.histogram is not None:
        outputs.histograms["cross_correlation"] = result.histogram
        outputs.plots["cross_correlation"] = PlotSpec(
            result.histogram, annotation=f"{result.verdict}, p = {result.p_value:.3g}", title="Cross-correlation"
        )
    return outputs
