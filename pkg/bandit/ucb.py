"""UCB1 selection over normalized time/power rewards."""

from __future__ import annotations
import math
from typing import Sequence

import numpy as np

from config import REWARD_EPSILON
from errors import ConfigurationError
from executor.models import Sample, check_sample
from space import Configuration
from .models import ArmStats, BanditState, MinMax, Weights

# Above this many arms, cold arms are found by rejection sampling instead of enumeration
COLD_ENUMERATION_LIMIT = 1 << 16


def normalize(samples: Sequence[float] | np.ndarray, running_minmax: MinMax) -> np.ndarray:
    """Min-max scale raw samples against the global running range; a flat range maps to 0."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        return arr
    if running_minmax is None:
        raise ConfigurationError("cannot normalize without a running min/max")
    lo, hi = running_minmax
    if hi == lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)


def weighted_reward(mean_time_hat, mean_power_hat, weights: Weights):
    """alpha / mu(tau_hat) + beta / mu(rho_hat), each mean floored at REWARD_EPSILON."""
    t = np.maximum(mean_time_hat, REWARD_EPSILON)
    p = np.maximum(mean_power_hat, REWARD_EPSILON)
    return weights.alpha / t + weights.beta / p


def _mean_hat(sums, pulls, mm: MinMax):
    # mean of normalized samples == normalized mean of raw samples
    lo, hi = mm
    if hi == lo:
        return np.zeros_like(sums)
    return (sums / pulls - lo) / (hi - lo)


def reward(arm: ArmStats, weights: Weights, minmax: tuple[MinMax, MinMax]) -> float:
    """Weighted reward of an arm: the mean of its min-max normalized samples, computed from running sums."""
    if arm.pulls == 0:
        raise ConfigurationError("reward is undefined for an arm that was never pulled")
    time_mm, power_mm = minmax
    if time_mm is None or power_mm is None:
        raise ConfigurationError("cannot normalize without a running min/max")
    mt = float(_mean_hat(np.float64(arm.time_sum), np.float64(arm.pulls), time_mm))
    mp = float(_mean_hat(np.float64(arm.power_sum), np.float64(arm.pulls), power_mm))
    return float(weighted_reward(mt, mp, weights))


def exploration_bonus(t: int, pulls: int | np.ndarray):
    return np.sqrt(2.0 * math.log(t) / pulls)


def ucb_value(arm: ArmStats, t: int, weights: Weights, minmax: tuple[MinMax, MinMax]) -> float:
    if t < 1:
        raise ConfigurationError(f"round must be >= 1, got {t}")
    if arm.pulls == 0:
        return math.inf
    return reward(arm, weights, minmax) + float(exploration_bonus(t, arm.pulls))


def ucb_scores(state: BanditState, weights: Weights) -> tuple[np.ndarray, np.ndarray]:
    """(arm ids, UCB values) for every pulled arm."""
    ids, pulls, time_sum, power_sum = state.table()
    if not len(ids):
        return ids, np.zeros(0)
    r = weighted_reward(
        _mean_hat(time_sum, pulls, state.global_time_minmax),
        _mean_hat(power_sum, pulls, state.global_power_minmax),
        weights,
    )
    return ids, r + exploration_bonus(state.t, pulls)


def _cold_pick(state: BanditState) -> int:
    size = state.space_size
    if size <= COLD_ENUMERATION_LIMIT:
        mask = np.ones(size, dtype=bool)
        mask[state.table()[0]] = False
        cold = np.flatnonzero(mask)
        return int(cold[state.rng.integers(len(cold))])
    while True:
        i = int(state.rng.integers(size))
        if i not in state.arms:
            return i


def select_index(state: BanditState, weights: Weights) -> tuple[int, float]:
    """Arm to play this round and its UCB value.

    Any cold arm has UCB +inf, so while cold arms remain one is drawn uniformly
    among them. Otherwise ties for the highest UCB are broken uniformly at random.
    """
    ids, scores = ucb_scores(state, weights)
    if len(ids) < state.space_size:
        return _cold_pick(state), math.inf
    best = scores.max()
    candidates = np.sort(ids[scores == best])
    if len(candidates) == 1:
        return int(candidates[0]), float(best)
    return int(candidates[state.rng.integers(len(candidates))]), float(best)


def select(state: BanditState, weights: Weights) -> Configuration:
    index, _ = select_index(state, weights)
    return state.space.config_at(index)


def update(state: BanditState, arm_index: int, sample: Sample) -> BanditState:
    """Record a sample for an arm. Invalid samples leave the state untouched."""
    if not 0 <= arm_index < state.space_size:
        raise ConfigurationError(f"arm {arm_index} out of range [0, {state.space_size})")
    if sample.config_index != arm_index:
        raise ConfigurationError(f"sample is for configuration {sample.config_index}, not {arm_index}")
    check_sample(sample)
    state.record(arm_index, sample.exec_time, sample.power)
    return state
