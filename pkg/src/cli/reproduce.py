"""
Reproduction recipes for the three reference bench measurements.

fig2: quantum-dot antibunching, g2(0) tuned to 0.081, plus a dim,
      dark-count-limited acquisition where the dark correction matters
fig3: IRF fit followed by a fixed-sigma lifetime fit
fig4: laser baseline with g2(0) = 1 and the folded side-peak width
"""

from pathlib import Path
from typing import Callable, Dict, Optional, Union

from ..core.rng import RngSeed
from ..data import parse_config
from ..data.run_config import RunConfig
from ..detection import irf_source, run_hbt, run_tcspc
from ..sources import solve_p_two
from ..utils import LogOperation, get_logger
from .outputs import RunOutputs, merge_outputs
from .workflows import fold_workflow, hbt_workflow, irf_workflow, lifetime_workflow, tcspc_histogram

logger = get_logger()

G2_TARGET = 0.081
G2_DARK_TARGET = 0.01


def preset_config(name: str, seed: Optional[int] = None) -> RunConfig:
    """Run config of a shipped preset, optionally with another seed."""
    text = f"preset: {name}\n"
    if seed is not None:
        text += f"seed: {int(seed)}\n"
    return parse_config(text)


def _with_p_two(config: RunConfig, target_g2: float) -> RunConfig:
    det = config.detectors
    p_two = solve_p_two(target_g2, config.source.p_emit, det.a.efficiency, det.b.efficiency, base=config.source)
    return config.model_copy(update={"source": config.source.model_copy(update={"p_two": p_two})})


def simulate_hbt(config: RunConfig, n_jobs: Optional[int] = None):
    acq = config.acquisition
    return run_hbt(
        config.source,
        config.detectors.a,
        config.detectors.b,
        RngSeed(config.seed),
        n_pulses=acq.n_pulses,
        duration=acq.duration_ps,
        crosstalk=config.crosstalk,
        n_jobs=n_jobs,
    )


def hbt_from_config(config: RunConfig, name: str, n_jobs: Optional[int] = None) -> RunOutputs:
    run = simulate_hbt(config, n_jobs)
    outputs = hbt_workflow(
        run.stream_a,
        run.stream_b,
        config.analysis,
        config.source.period_ps,
        run.duration,
        dark_a_hz=config.detectors.a.dark_rate_hz,
        dark_b_hz=config.detectors.b.dark_rate_hz,
        name=name,
    )
    outputs.report.add("p_two", config.source.p_two)
    return outputs


def reproduce_fig2(seed: Optional[int] = None, out_dir=None, n_jobs: Optional[int] = None) -> RunOutputs:
    """Antibunched quantum dot, bright and dark-count-limited."""
    bright = _with_p_two(preset_config("fig2-qd", seed), G2_TARGET)
    dim = _with_p_two(preset_config("fig2-qd-dark", seed), G2_DARK_TARGET)
    outputs = merge_outputs(
        "fig2",
        "Quantum-dot antibunching",
        [hbt_from_config(bright, "bright", n_jobs), hbt_from_config(dim, "dark_limited", n_jobs)],
    )
    return _finish(outputs, out_dir)


def reproduce_fig3(seed: Optional[int] = None, out_dir=None, n_jobs: Optional[int] = None) -> RunOutputs:
    """IRF measured on the laser line, then the lifetime with the IRF width held fixed."""
    config = preset_config("fig3-lifetime", seed)
    acq, analysis = config.acquisition, config.analysis
    root = RngSeed(config.seed)
    irf_pulses = analysis.irf_n_pulses or acq.n_pulses

    irf_run = run_tcspc(
        irf_source(config.source),
        config.detectors.a,
        irf_pulses,
        root.child("irf"),
        cable_delay_ps=acq.cable_delay_ps,
        trigger_jitter_fwhm_ps=acq.trigger_jitter_fwhm_ps,
        n_jobs=n_jobs,
    )
    irf = irf_workflow(tcspc_histogram(irf_run.start, irf_run.stop, analysis))

    decay_run = run_tcspc(
        config.source,
        config.detectors.a,
        acq.n_pulses,
        root.child("lifetime"),
        cable_delay_ps=acq.cable_delay_ps,
        trigger_jitter_fwhm_ps=acq.trigger_jitter_fwhm_ps,
        n_jobs=n_jobs,
    )
    lifetime = lifetime_workflow(
        tcspc_histogram(decay_run.start, decay_run.stop, analysis), fix_sigma=irf.values["sigma_ps"]
    )
    outputs = merge_outputs("fig3", "Lifetime with measured IRF", [irf, lifetime])
    return _finish(outputs, out_dir)


def reproduce_fig4(seed: Optional[int] = None, out_dir=None, n_jobs: Optional[int] = None) -> RunOutputs:
    """Poissonian laser: flat g2(0) and sqrt(2)-broadened side peaks."""
    config = preset_config("fig4-laser", seed)
    run = simulate_hbt(config, n_jobs)
    period = config.source.period_ps
    g2 = hbt_workflow(run.stream_a, run.stream_b, config.analysis, period, run.duration, name="baseline")
    fold = fold_workflow(run.stream_a, run.stream_b, config.analysis, period, name="side_peak")
    outputs = merge_outputs("fig4", "Laser baseline", [g2, fold])
    return _finish(outputs, out_dir)


def _finish(outputs: RunOutputs, out_dir: Optional[Union[str, Path]]) -> RunOutputs:
    if out_dir is not None:
        outputs.write(out_dir)
    return outputs


RECIPES: Dict[str, Callable[..., RunOutputs]] = {
    "fig2": reproduce_fig2,
    "fig3": reproduce_fig3,
    "fig4": reproduce_fig4,
}


def reproduce(name: str, seed: Optional[int] = None, out_dir=None, n_jobs: Optional[int] = None) -> RunOutputs:
    if name not in RECIPES:
        raise ValueError(f"unknown recipe '{name}' (known: {', '.join(RECIPES)})")
    with LogOperation(f"reproduce {name}", seed=seed):
        return RECIPES[name](seed=seed, out_dir=out_dir, n_jobs=n_jobs)
