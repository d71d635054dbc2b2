"""
Detector and cross-talk specs.

Efficiency is the lumped per-channel value, coupling losses included; the
50/50 splitter factor is applied by the beamsplitter, never folded in here.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class DetectorSpec(BaseModel):
    """One detection channel."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["sspd", "gated_apd"] = "sspd"
    efficiency: float = Field(default=0.02, ge=0, le=1, description="Lumped detection efficiency")
    dark_rate_hz: float = Field(default=10.0, ge=0)
    jitter_fwhm_ps: float = Field(default=68.0, ge=0, description="Gaussian timing jitter")
    dead_time_ps: int = Field(default=10_000, ge=0, description="Non-paralyzable dead time")
    gate_period_ps: Optional[int] = Field(default=None, gt=0)
    gate_width_ps: Optional[int] = Field(default=None, gt=0)
    gate_offset_ps: int = Field(default=0, ge=0)
    afterpulse_prob: float = Field(default=0.0, ge=0, le=1)
    afterpulse_delay_tau_ps: float = Field(default=1000.0, gt=0)
    wavelength_nm: Optional[float] = Field(default=None, gt=0, description="Metadata only")

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "DetectorSpec":
        if self.kind == "gated_apd":
            if self.gate_period_ps is None or self.gate_width_ps is None:
                raise ValueError("gated_apd needs gate_period_ps and gate_width_ps")
            if self.gate_width_ps > self.gate_period_ps:
                raise ValueError("gate_width_ps cannot exceed gate_period_ps")
        elif self.afterpulse_prob > 0:
            raise ValueError("afterpulsing is only modelled for gated_apd detectors")
        return self

    @property
    def gated(self) -> bool:
        return self.kind == "gated_apd"


class CrosstalkSpec(BaseModel):
    """Click on one channel inducing a click on the other."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    coupling: float = Field(default=0.0, ge=0, le=1)
    induced_delay_ps: int = Field(default=0, description="Delay of the induced click, may be negative")
    induced_jitter_fwhm_ps: float = Field(default=0.0, ge=0)
