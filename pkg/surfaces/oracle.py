"""Exhaustive ground truth over a surface."""

from __future__ import annotations
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from bandit.models import Weights
from bandit.ucb import normalize
from config import ORACLE_GUARD
from errors import OracleGuardError
from space import Configuration
from .landscape import SyntheticSurface, sweep

Metric = Union[Literal["time", "power"], Weights]


@dataclass(frozen=True)
class OracleResult:
    config: Configuration
    value: float
    metric: str


def guard(size: int, limit: int = ORACLE_GUARD) -> None:
    if size > limit:
        raise OracleGuardError(f"exhaustive scan of {size} configurations exceeds the limit of {limit}")


def oracle(surface: SyntheticSurface, q: float, metric: Metric = "time") -> OracleResult:
    """Best configuration at fidelity q; ties go to the lowest index.

    With Weights, the objective is alpha*tau_hat + beta*rho_hat using min-max
    normalization over the full sweep.
    """
    guard(surface.size)
    times, powers = sweep(surface, q)
    if metric == "time":
        scores, label = times, "time"
    elif metric == "power":
        scores, label = powers, "power"
    elif isinstance(metric, Weights):
        t_hat = normalize(times, (float(times.min()), float(times.max())))
        p_hat = normalize(powers, (float(powers.min()), float(powers.max())))
        scores = metric.alpha * t_hat + metric.beta * p_hat
        label = f"weighted(alpha={metric.alpha},beta={metric.beta})"
    else:
        raise ValueError(f"unknown oracle metric {metric!r}")
    best = int(np.argmin(scores))
    return OracleResult(surface.space.config_at(best), float(scores[best]), label)
