"""Analysis result schemas."""

from __future__ import annotations
from typing import Optional

from pydantic import BaseModel, ConfigDict, computed_field


class RegretCurve(BaseModel):
    """Cumulative regret R_1..R_T of one run against stationary arm means."""
    model_config = ConfigDict(frozen=True)

    values: list[float]
    mu_star: float
    play_count_regret: float    # T*mu_star - sum_k mu_k * N_k, equal to values[-1]

    @property
    def final(self) -> float:
        return self.values[-1] if self.values else 0.0

    def per_play(self, n: int) -> float:
        """R_n / n."""
        return self.values[n - 1] / n


class GainReport(BaseModel):
    """Performance gain of the best configuration over the default."""
    model_config = ConfigDict(frozen=True)

    metric: str = "time"        # "time" (seconds) or "power" (watts)
    f_default: float
    f_best: float
    default_index: Optional[int] = None
    best_index: Optional[int] = None
    source: str = "surface"     # "surface" (true values) or "trace" (observed means)

    @computed_field
    @property
    def pg_best(self) -> float:
        return (self.f_default - self.f_best) * 100.0 / self.f_default

    def to_text(self) -> str:
        lines = [
            f"metric={self.metric}",
            f"source={self.source}",
            f"default_index={'' if self.default_index is None else self.default_index}",
            f"best_index={'' if self.best_index is None else self.best_index}",
            f"f_default={self.f_default!r}",
            f"f_best={self.f_best!r}",
            f"pg_best_pct={self.pg_best!r}",
        ]
        return "\n".join(lines) + "\n"
