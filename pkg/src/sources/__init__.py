"""
Photon sources: pulsed quantum dot, gain-switched laser, CW emitter,
plus the analytic coincidence oracle for the pulsed ones.
"""

from .base_source import BaseSource
from .cw_emitter import CwEmitterSource, generate_cw_emitter
from .emission import NO_PULSE, EmissionRecord
from .oracle import CoincidenceExpectation, expected_coincidence_rates, solve_p_two
from .pulsed_laser import PulsedLaserSource, generate_laser_pulsed
from .quantum_dot import QuantumDotSource, generate_qd_pulsed
from .specs import CwEmitterSpec, LaserPulsedSpec, QdPulsedSpec, SourceSpec

_SOURCES = {
    "qd_pulsed": QuantumDotSource,
    "laser_pulsed": PulsedLaserSource,
    "cw_emitter": CwEmitterSource,
}


def source_from_spec(spec) -> BaseSource:
    """Wrap a source spec in its source class."""
    try:
        source_cls = _SOURCES[spec.kind]
    except (AttributeError, KeyError):
        raise ValueError(f"unknown source spec {spec!r}") from None
    return source_cls(spec)


__all__ = [
    "BaseSource",
    "QuantumDotSource",
    "PulsedLaserSource",
    "CwEmitterSource",
    "EmissionRecord",
    "NO_PULSE",
    "QdPulsedSpec",
    "LaserPulsedSpec",
    "CwEmitterSpec",
    "SourceSpec",
    "generate_qd_pulsed",
    "generate_laser_pulsed",
    "generate_cw_emitter",
    "expected_coincidence_rates",
    "CoincidenceExpectation",
    "solve_p_two",
    "source_from_spec",
]
