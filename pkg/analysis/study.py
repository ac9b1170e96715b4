"""Replication studies: the sampling study, the best-run regret envelope and fidelity transfer."""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from bandit.models import TuneReport
from errors import AnalysisError
from surfaces import SyntheticSurface, guard, oracle, ranking, sweep
from .metrics import distance_from_oracle, performance_gain, topk_overlap, transfer_distance
from .models import RegretCurve


@dataclass(frozen=True)
class ReplicationOutcome:
    seed: int
    x_opt_index: int
    x_opt: str
    value: float            # true metric of x_opt
    distance_pct: float     # from the oracle
    pg_best_pct: float      # versus the default configuration
    total_reward: float


@dataclass
class SamplingSummary:
    metric: str
    oracle_index: int
    oracle_value: float
    default_index: int
    default_value: float
    outcomes: list[ReplicationOutcome] = field(default_factory=list)

    @property
    def mean_distance(self) -> float:
        return float(np.mean([o.distance_pct for o in self.outcomes]))

    @property
    def mean_gain(self) -> float:
        return float(np.mean([o.pg_best_pct for o in self.outcomes]))

    def within(self, pct: float) -> int:
        """Replications whose x_opt lands within pct of the oracle."""
        return sum(1 for o in self.outcomes if o.distance_pct <= pct)

    def improved(self) -> int:
        return sum(1 for o in self.outcomes if o.pg_best_pct > 0)

    def to_text(self) -> str:
        lines = [
            f"replications={len(self.outcomes)}",
            f"metric={self.metric}",
            f"oracle_index={self.oracle_index}",
            f"oracle_value={self.oracle_value!r}",
            f"default_index={self.default_index}",
            f"default_value={self.default_value!r}",
            f"mean_distance_pct={self.mean_distance!r}",
            f"mean_pg_best_pct={self.mean_gain!r}",
            f"within_12pct={self.within(12.0)}",
            f"improved_over_default={self.improved()}",
        ]
        return "\n".join(lines) + "\n"


def sampling_summary(
    reports: Sequence[TuneReport],
    surface: SyntheticSurface,
    q: float,
    metric: Literal["time", "power"] = "time",
) -> SamplingSummary:
    """Distance from oracle and gain over the default for each replication's x_opt."""
    if not reports:
        raise AnalysisError("no replications")
    best = oracle(surface, q, metric)
    default = surface.space.default
    values = surface.times if metric == "time" else surface.powers
    x_opts = np.array([r.x_opt.index for r in reports])
    x_values = values(x_opts, q)
    default_value = float(values(np.array([default.index]), q)[0])

    summary = SamplingSummary(metric, best.config.index, best.value, default.index, default_value)
    for r, v in zip(reports, x_values):
        summary.outcomes.append(ReplicationOutcome(
            seed=int(r.settings.get("seed", 0)),
            x_opt_index=r.x_opt.index,
            x_opt=r.x_opt_label,
            value=float(v),
            distance_pct=distance_from_oracle(float(v), best.value),
            pg_best_pct=performance_gain(default_value, float(v)),
            total_reward=r.total_reward,
        ))
    return summary


@dataclass
class RegretEnvelope:
    """Per-seed regret curves, their pointwise minimum and the least-final-regret run."""
    curves: dict[int, RegretCurve]
    envelope: list[float]
    best_seed: int

    @property
    def best_run(self) -> RegretCurve:
        return self.curves[self.best_seed]

    @property
    def mean(self) -> list[float]:
        return np.mean([c.values for c in self.curves.values()], axis=0).tolist()


def regret_envelope(curves: Mapping[int, RegretCurve]) -> RegretEnvelope:
    if not curves:
        raise AnalysisError("no regret curves")
    lengths = {len(c.values) for c in curves.values()}
    if len(lengths) != 1:
        raise AnalysisError("regret curves have different lengths")
    seeds = sorted(curves)
    stacked = np.array([curves[s].values for s in seeds])
    best_seed = min(seeds, key=lambda s: (curves[s].final, s))
    return RegretEnvelope(
        curves={s: curves[s] for s in seeds},
        envelope=stacked.min(axis=0).tolist(),
        best_seed=best_seed,
    )


@dataclass(frozen=True)
class FidelityTransfer:
    """How well the low-fidelity top-k holds up at high fidelity."""
    metric: str
    q_low: float
    q_high: float
    k: int
    overlap: int
    mean_distance_pct: float

    def to_text(self) -> str:
        return (f"metric={self.metric}\nq_low={self.q_low}\nq_high={self.q_high}\nk={self.k}\n"
                f"overlap={self.overlap}\nmean_distance_pct={self.mean_distance_pct!r}\n")


def fidelity_transfer(
    surface: SyntheticSurface,
    q_low: float,
    q_high: float,
    k: int = 20,
    metric: Literal["time", "power"] = "time",
) -> FidelityTransfer:
    """Rank every configuration at q_low, then score the top-k at q_high."""
    guard(surface.size)
    q_low = surface.fidelity.check(q_low)
    q_high = surface.fidelity.check(q_high)
    column = 0 if metric == "time" else 1
    low = sweep(surface, q_low)[column]
    high = sweep(surface, q_high)[column]
    overlap = topk_overlap(ranking(low), ranking(high), k)
    return FidelityTransfer(metric, q_low, q_high, k, overlap, transfer_distance(low, high, k))
