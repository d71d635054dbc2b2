"""
Pydantic specs for the three source models.

Field names carry their unit (`_ps`, `_hz`, `_nm`); the `kind` field
discriminates the union used by run configs.
"""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from ..core.timebase import rep_period_ps


class _SpecModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class QdPulsedSpec(_SpecModel):
    """Pulsed quantum dot: at most two photons per excitation pulse."""

    kind: Literal["qd_pulsed"] = "qd_pulsed"
    rep_rate_hz: float = Field(default=82e6, gt=0, description="Pump repetition rate")
    lifetime_ps: float = Field(default=400.0, ge=0, description="Spontaneous emission lifetime")
    p_emit: float = Field(default=1.0, ge=0, le=1, description="Emission probability per pulse")
    p_two: float = Field(
        default=0.0, ge=0, le=1, description="Probability of a second photon given one was emitted"
    )
    excitation_jitter_fwhm_ps: float = Field(
        default=0.0, ge=0, description="Gaussian spread of the effective excitation instant"
    )
    wavelength_nm: float = Field(default=902.0, gt=0, description="Metadata only")

    @property
    def period_ps(self) -> int:
        return rep_period_ps(self.rep_rate_hz)


class LaserPulsedSpec(_SpecModel):
    """Gain-switched laser: Poisson photon number, whole-pulse timing jitter."""

    kind: Literal["laser_pulsed"] = "laser_pulsed"
    rep_rate_hz: float = Field(default=79e6, gt=0)
    mean_photon_number: float = Field(default=8.4e-4, ge=0, le=50, description="Mean photons per pulse")
    pulse_jitter_fwhm_ps: float = Field(default=2300.0, ge=0)
    wavelength_nm: float = Field(default=1550.0, gt=0)

    @property
    def period_ps(self) -> int:
        return rep_period_ps(self.rep_rate_hz)


class CwEmitterSpec(_SpecModel):
    """CW-pumped emitter as a two-stage renewal process (extension model)."""

    kind: Literal["cw_emitter"] = "cw_emitter"
    reexcitation_rate_hz: float = Field(default=1e6, ge=0)
    lifetime_ps: float = Field(default=400.0, ge=0)
    wavelength_nm: float = Field(default=902.0, gt=0)


PulsedSourceSpec = Union[QdPulsedSpec, LaserPulsedSpec]

SourceSpec = Annotated[
    Union[QdPulsedSpec, LaserPulsedSpec, CwEmitterSpec],
    Field(discriminator="kind"),
]
