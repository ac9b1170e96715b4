"""Regret against stationary arm means and the logarithmic UCB bound."""

from __future__ import annotations
import math
from collections import Counter
from typing import Mapping, Sequence

import numpy as np

from bandit.models import TraceRecord, TuneReport, Weights
from bandit.ucb import normalize, weighted_reward
from errors import AnalysisError
from surfaces import SyntheticSurface, guard, sweep
from .models import RegretCurve

Means = np.ndarray | Mapping[int, float]


def arm_means(surface: SyntheticSurface, weights: Weights, q: float) -> np.ndarray:
    """Noiseless weighted reward of every arm, normalized by the full-sweep min/max."""
    guard(surface.size)
    times, powers = sweep(surface, q)
    t_hat = normalize(times, (float(times.min()), float(times.max())))
    p_hat = normalize(powers, (float(powers.min()), float(powers.max())))
    return weighted_reward(t_hat, p_hat, weights)


def _lookup(means: Means, indices: Sequence[int]) -> np.ndarray:
    if isinstance(means, Mapping):
        missing = sorted({i for i in indices if i not in means})
        if missing:
            raise AnalysisError(f"no true mean for arms {missing[:10]}")
        return np.array([means[i] for i in indices], dtype=float)
    arr = np.asarray(means, dtype=float)
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= len(arr)):
        raise AnalysisError(f"trace references arms outside the {len(arr)} known means")
    return arr[idx]


def _mu_star(means: Means) -> float:
    values = list(means.values()) if isinstance(means, Mapping) else np.asarray(means, dtype=float)
    if len(values) == 0:
        raise AnalysisError("no arm means")
    return float(np.max(values))


def regret_curve(trace: Sequence[TraceRecord], true_means: Means) -> RegretCurve:
    """Cumulative regret sum_t (mu* - mu_{j(t)}), checked against the play-count form."""
    if not trace:
        raise AnalysisError("empty trace")
    arms = [rec.arm_index for rec in trace]
    mus = _lookup(true_means, arms)
    mu_star = _mu_star(true_means)
    values = np.cumsum(mu_star - mus)

    counts = Counter(arms)
    keys = sorted(counts)
    by_count = len(trace) * mu_star - float(np.dot(_lookup(true_means, keys), [counts[k] for k in keys]))
    tol = 1e-9 * max(1.0, abs(mu_star) * len(trace))
    if not math.isclose(float(values[-1]), by_count, rel_tol=1e-9, abs_tol=tol):
        raise AnalysisError(f"regret forms disagree: {values[-1]!r} vs {by_count!r}")
    return RegretCurve(values=values.tolist(), mu_star=mu_star, play_count_regret=by_count)


def play_count_regret(traces: Sequence[Sequence[TraceRecord]] | Sequence[TuneReport], true_means: Means) -> float:
    """T*mu* - sum_k mu_k E[N_k], with E[N_k] the mean play count over runs."""
    if not traces:
        raise AnalysisError("no runs")
    runs = [r.trace if isinstance(r, TuneReport) else r for r in traces]
    T = len(runs[0])
    if any(len(r) != T for r in runs):
        raise AnalysisError("runs have different lengths")
    counts: Counter[int] = Counter()
    for r in runs:
        counts.update(rec.arm_index for rec in r)
    keys = sorted(counts)
    expected = np.array([counts[k] for k in keys], dtype=float) / len(runs)
    return T * _mu_star(true_means) - float(np.dot(_lookup(true_means, keys), expected))


def bound_terms(true_means: Means) -> tuple[float, float]:
    """(sum of 1/gap over suboptimal arms, sum of gaps)."""
    values = np.asarray(list(true_means.values()) if isinstance(true_means, Mapping) else true_means, dtype=float)
    if values.size == 0:
        raise AnalysisError("no arm means")
    gaps = values.max() - values
    sub = gaps[gaps > 0]
    if sub.size == 0:
        return 0.0, 0.0
    return float(np.sum(1.0 / sub)), float(np.sum(sub))


def ucb_regret_bound(n: int, true_means: Means) -> float:
    """8 ln(n) sum 1/gap + (1 + pi^2/3) sum gap; 0 when every arm has the same mean."""
    if n < 1:
        raise AnalysisError(f"n must be >= 1, got {n}")
    inv_gaps, gaps = bound_terms(true_means)
    if gaps == 0.0:
        return 0.0
    return 8.0 * math.log(n) * inv_gaps + (1.0 + math.pi ** 2 / 3.0) * gaps


def bound_curve(T: int, true_means: Means) -> list[float]:
    """ucb_regret_bound(n) for n = 1..T."""
    inv_gaps, gaps = bound_terms(true_means)
    if gaps == 0.0:
        return [0.0] * T
    n = np.arange(1, T + 1)
    return (8.0 * np.log(n) * inv_gaps + (1.0 + math.pi ** 2 / 3.0) * gaps).tolist()
