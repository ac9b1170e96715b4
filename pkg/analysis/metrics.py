"""Point metrics: distance from oracle, performance gain, top-k overlap and fidelity transfer."""

from __future__ import annotations
from typing import Optional, Sequence

import numpy as np

from errors import AnalysisError
from .models import GainReport


def distance_from_oracle(value: float, oracle_value: float) -> float:
    """Percent by which a configuration's metric exceeds the oracle's."""
    if oracle_value <= 0:
        raise AnalysisError(f"oracle value must be positive, got {oracle_value}")
    return (value - oracle_value) * 100.0 / oracle_value


def performance_gain(f_default: float, f_best: float) -> float:
    """Percent improvement over the default; negative for a regression."""
    if f_default <= 0:
        raise AnalysisError(f"default metric must be positive, got {f_default}")
    return (f_default - f_best) * 100.0 / f_default


def gain_report(
    f_default: float,
    f_best: float,
    metric: str = "time",
    default_index: Optional[int] = None,
    best_index: Optional[int] = None,
    source: str = "surface",
) -> GainReport:
    if f_default <= 0:
        raise AnalysisError(f"default metric must be positive, got {f_default}")
    return GainReport(
        metric=metric, f_default=f_default, f_best=f_best,
        default_index=default_index, best_index=best_index, source=source,
    )


def topk_overlap(
    ranking_a: Sequence[int] | np.ndarray,
    ranking_b: Sequence[int] | np.ndarray,
    k: int,
    space_size: Optional[int] = None,
) -> int:
    """Number of configurations shared by the top-k of two rankings."""
    a = np.asarray(ranking_a)
    b = np.asarray(ranking_b)
    if len(a) != len(b):
        raise AnalysisError(f"rankings cover different spaces ({len(a)} vs {len(b)} configurations)")
    if space_size is not None and len(a) != space_size:
        raise AnalysisError(f"rankings have {len(a)} entries, space has {space_size}")
    if not 0 <= k <= len(a):
        raise AnalysisError(f"k={k} outside [0, {len(a)}]")
    return len(set(a[:k].tolist()) & set(b[:k].tolist()))


def transfer_distance(values_low: Sequence[float] | np.ndarray, values_high: Sequence[float] | np.ndarray, k: int) -> float:
    """Mean distance from the high-fidelity oracle of the k best low-fidelity configurations.

    Both arrays are indexed by configuration; the top-k is taken from `values_low`
    and scored on `values_high`.
    """
    lo = np.asarray(values_low, dtype=float)
    hi = np.asarray(values_high, dtype=float)
    if len(lo) != len(hi):
        raise AnalysisError(f"value arrays cover different spaces ({len(lo)} vs {len(hi)} configurations)")
    if not 1 <= k <= len(lo):
        raise AnalysisError(f"k={k} outside [1, {len(lo)}]")
    best = float(hi.min())
    if best <= 0:
        raise AnalysisError(f"oracle value must be positive, got {best}")
    top = np.argsort(lo, kind="stable")[:k]
    return float(np.mean((hi[top] - best) * 100.0 / best))
