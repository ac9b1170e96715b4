"""Fidelity knob q -> problem size (mesh cells)."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import ConfigurationError


class FidelityMap(BaseModel):
    """Linear map from q in [q_min, q_max] to a cubic mesh m^3, m in [m_min, m_max]."""
    model_config = ConfigDict(frozen=True)

    q_min: float = 0.0
    q_max: float = 1.0
    m_min: int = Field(10, ge=1)
    m_max: int = Field(100, ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "FidelityMap":
        if self.q_max < self.q_min:
            raise ValueError("q_max must be >= q_min")
        if self.m_max < self.m_min:
            raise ValueError("m_max must be >= m_min")
        return self

    def check(self, q: float) -> float:
        q = float(q)
        if not self.q_min <= q <= self.q_max:
            raise ConfigurationError(f"fidelity q={q} outside [{self.q_min}, {self.q_max}]")
        return q

    def position(self, q: float) -> float:
        """0 at q_min, 1 at q_max."""
        q = self.check(q)
        if self.q_max == self.q_min:
            return 1.0
        return (q - self.q_min) / (self.q_max - self.q_min)

    def cells(self, q: float) -> float:
        lo, hi = self.m_min ** 3, self.m_max ** 3
        return lo + (hi - lo) * self.position(q)


DEFAULT_FIDELITY = FidelityMap()


def fidelity_to_cells(q: float, fidelity: FidelityMap = DEFAULT_FIDELITY) -> float:
    return fidelity.cells(q)
