"""Bandit state, per-arm statistics and run reports."""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import DEFAULT_ALPHA, DEFAULT_BETA
from space import ConfigSpace, Configuration

MinMax = Optional[tuple[float, float]]


class Weights(BaseModel):
    """Objective weights: alpha on execution time, beta on power."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(DEFAULT_ALPHA, ge=0, le=1)
    beta: float = Field(DEFAULT_BETA, ge=0, le=1)


@dataclass
class ArmStats:
    """Everything observed for one configuration."""
    pulls: int = 0
    reward_sum: float = 0.0
    reward_sq_sum: float = 0.0
    time_samples: list[float] = field(default_factory=list)
    power_samples: list[float] = field(default_factory=list)
    time_sum: float = 0.0
    power_sum: float = 0.0

    def add(self, exec_time: float, power: float) -> None:
        self.pulls += 1
        self.time_samples.append(exec_time)
        self.power_samples.append(power)
        self.time_sum += exec_time
        self.power_sum += power

    @property
    def mean_time(self) -> float:
        return self.time_sum / self.pulls if self.pulls else float("nan")

    @property
    def mean_power(self) -> float:
        return self.power_sum / self.pulls if self.pulls else float("nan")

    @property
    def reward_mean(self) -> float:
        return self.reward_sum / self.pulls if self.pulls else 0.0

    @property
    def reward_variance(self) -> float:
        if self.pulls < 2:
            return 0.0
        mean = self.reward_mean
        return max(self.reward_sq_sum / self.pulls - mean * mean, 0.0)

    def record_reward(self, r: float) -> None:
        self.reward_sum += r
        self.reward_sq_sum += r * r


@dataclass
class BanditState:
    """Sparse arm table plus the global running min/max of raw measurements.

    Arms that were never pulled have no entry. `t` is the 1-based round about to
    be played, so t == total pulls + 1.
    """
    space: ConfigSpace
    rng_seed: int = 0
    arms: dict[int, ArmStats] = field(default_factory=dict)
    t: int = 1
    global_time_minmax: MinMax = None
    global_power_minmax: MinMax = None
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rng = np.random.default_rng(self.rng_seed)
        # Vectorised mirror of `arms` in first-pull order
        self._ids = np.zeros(64, dtype=np.int64)
        self._pulls = np.zeros(64)
        self._time_sum = np.zeros(64)
        self._power_sum = np.zeros(64)
        self._slot: dict[int, int] = {}

    @property
    def space_size(self) -> int:
        return self.space.size

    @property
    def minmax(self) -> tuple[MinMax, MinMax]:
        return self.global_time_minmax, self.global_power_minmax

    @property
    def total_pulls(self) -> int:
        return self.t - 1

    def _grow(self) -> None:
        n = len(self._ids) * 2
        for name in ("_ids", "_pulls", "_time_sum", "_power_sum"):
            old = getattr(self, name)
            new = np.zeros(n, dtype=old.dtype)
            new[: len(old)] = old
            setattr(self, name, new)

    def record(self, index: int, exec_time: float, power: float) -> ArmStats:
        arm = self.arms.get(index)
        if arm is None:
            arm = self.arms[index] = ArmStats()
            slot = len(self._slot)
            if slot == len(self._ids):
                self._grow()
            self._slot[index] = slot
            self._ids[slot] = index
        slot = self._slot[index]
        arm.add(exec_time, power)
        self._pulls[slot] += 1
        self._time_sum[slot] += exec_time
        self._power_sum[slot] += power
        self.global_time_minmax = _widen(self.global_time_minmax, exec_time)
        self.global_power_minmax = _widen(self.global_power_minmax, power)
        self.t += 1
        return arm

    def table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(arm ids, pulls, time sums, power sums) for every pulled arm."""
        n = len(self._slot)
        return self._ids[:n], self._pulls[:n], self._time_sum[:n], self._power_sum[:n]


def _widen(mm: MinMax, value: float) -> tuple[float, float]:
    if mm is None:
        return (value, value)
    return (min(mm[0], value), max(mm[1], value))


@dataclass(frozen=True)
class TraceRecord:
    """One round of a run."""
    t: int
    arm_index: int
    config: str          # "name=value;..." label
    raw_time: float
    raw_power: float
    reward: float        # chosen arm's mean reward after the update
    ucb: float           # chosen arm's UCB before the update (inf if cold)


@dataclass
class TuneReport:
    """Outcome of one run: most-played configuration, full trace and play counts."""
    x_opt: Configuration
    x_opt_label: str
    trace: list[TraceRecord]
    final_counts: dict[int, int]
    settings: dict[str, object] = field(default_factory=dict)
    arms: dict[int, ArmStats] = field(default_factory=dict, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def total_reward(self) -> float:
        return sum(r.reward for r in self.trace)

    def counts_by_assignment(self, space: ConfigSpace) -> dict[str, int]:
        return {space.describe(space.config_at(i)): n for i, n in sorted(self.final_counts.items())}

    def to_text(self) -> str:
        """key=value summary, keys in a fixed order."""
        best = self.arms.get(self.x_opt.index)
        lines = [
            f"x_opt_index={self.x_opt.index}",
            f"x_opt={self.x_opt_label}",
            f"x_opt_pulls={self.final_counts.get(self.x_opt.index, 0)}",
            f"iterations={self.iterations}",
            f"distinct_arms={len(self.final_counts)}",
            f"total_reward={self.total_reward!r}",
        ]
        if best is not None:
            lines.append(f"x_opt_reward_variance={best.reward_variance!r}")
        for key in sorted(self.settings):
            lines.append(f"{key}={self.settings[key]}")
        lines.append("counts=" + ",".join(f"{i}:{n}" for i, n in sorted(self.final_counts.items())))
        return "\n".join(lines) + "\n"
