"""Measurement records and noise settings."""

from __future__ import annotations
import math

from pydantic import BaseModel, ConfigDict, Field

from errors import MeasurementError


class Sample(BaseModel):
    """One measured execution of a configuration."""
    model_config = ConfigDict(frozen=True)

    config_index: int
    exec_time: float               # seconds (tau)
    power: float                   # watts (rho)
    fidelity: float = 1.0          # q
    noise_applied: float = 0.0     # noise level used, 0 if none

    @property
    def is_valid(self) -> bool:
        return (
            math.isfinite(self.exec_time) and self.exec_time > 0
            and math.isfinite(self.power) and self.power > 0
        )


def check_sample(sample: Sample) -> Sample:
    """Reject non-finite or non-positive measurements."""
    if not sample.is_valid:
        raise MeasurementError(
            f"invalid measurement for configuration {sample.config_index}: "
            f"exec_time={sample.exec_time!r} s, power={sample.power!r} W"
        )
    return sample


class NoiseSpec(BaseModel):
    """Uniform multiplicative measurement noise, e.g. level 0.05/0.10/0.15."""
    model_config = ConfigDict(frozen=True)

    level: float = Field(0.0, ge=0, le=0.5)
    seed: int = Field(0, ge=0)
    perturb_time: bool = True
    perturb_power: bool = True
