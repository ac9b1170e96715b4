"""Synthetic measurement noise: value * (1 + u), u ~ Uniform[-level, +level]."""

from __future__ import annotations
import math

import numpy as np

from errors import MeasurementError
from .models import NoiseSpec


def noise_rng(noise: NoiseSpec, draw_index: int) -> np.random.Generator:
    """Generator for one draw, fully determined by (noise seed, draw index)."""
    return np.random.default_rng([noise.seed, int(draw_index)])


def apply_noise(value: float, noise: NoiseSpec, rng: np.random.Generator) -> float:
    if not (math.isfinite(value) and value > 0):
        raise MeasurementError(f"cannot perturb non-positive measurement {value!r}")
    if noise.level == 0:
        return value
    u = rng.uniform(-noise.level, noise.level)
    return value * (1.0 + u)


def perturb(exec_time: float, power: float, noise: NoiseSpec, draw_index: int) -> tuple[float, float]:
    """Apply noise to time then power, each with its own draw, honoring the per-metric toggles."""
    if noise.level == 0:
        return exec_time, power
    rng = noise_rng(noise, draw_index)
    if noise.perturb_time:
        exec_time = apply_noise(exec_time, noise, rng)
    if noise.perturb_power:
        power = apply_noise(power, noise, rng)
    return exec_time, power
