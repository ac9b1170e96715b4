"""Search-space schema: parameters, spaces and configurations.

A configuration's linear index is a mixed-radix number over the parameters in
file order, last parameter fastest-varying.
"""

from __future__ import annotations
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from errors import ConfigurationError

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True, slots=True)
class Configuration:
    """One assignment of a value to every parameter."""
    index: int
    assignment: tuple[int, ...]  # value index per parameter, in parameter order


class ParameterDef(BaseModel):
    """A named discrete parameter and its ordered value tokens."""
    model_config = ConfigDict(frozen=True)

    name: str
    values: tuple[str, ...]
    substitution_token: str

    @field_validator("name")
    @classmethod
    def _identifier(cls, v: str) -> str:
        if not _IDENTIFIER.match(v):
            raise ValueError(f"parameter name {v!r} is not an identifier")
        return v

    @field_validator("values")
    @classmethod
    def _distinct(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if not v:
            raise ValueError("empty value list")
        seen = set()
        for token in v:
            if not token:
                raise ValueError("empty value token")
            if token in seen:
                raise ValueError(f"duplicate value {token!r}")
            seen.add(token)
        return v

    @property
    def numeric_values(self) -> tuple[Optional[float], ...]:
        """Numeric interpretation of each token, None where the token is categorical."""
        out = []
        for token in self.values:
            try:
                out.append(float(token))
            except ValueError:
                out.append(None)
        return tuple(out)

    def value_index(self, token: str) -> int:
        """Position of a token, matching numerically when the literal differs (8 vs 8.0)."""
        if token in self.values:
            return self.values.index(token)
        try:
            wanted = float(token)
        except ValueError:
            raise ConfigurationError(f"{self.name}: value {token!r} not in range") from None
        for i, num in enumerate(self.numeric_values):
            if num is not None and num == wanted:
                return i
        raise ConfigurationError(f"{self.name}: value {token!r} not in range")


class CommandSpec(BaseModel):
    """Optional [command] section of a space file."""
    model_config = ConfigDict(frozen=True)

    template: str
    probe: Optional[str] = None  # "constant:<W>" or "file:<path>"
    poll_ms: Optional[int] = None


class ConfigSpace(BaseModel):
    """Ordered parameters whose Cartesian product defines the arms."""
    model_config = ConfigDict(frozen=True)

    parameters: tuple[ParameterDef, ...]
    default: Configuration
    command: Optional[CommandSpec] = None
    name: str = "custom"

    @model_validator(mode="after")
    def _check(self) -> "ConfigSpace":
        if not self.parameters:
            raise ValueError("space has no parameters")
        names = [p.name for p in self.parameters]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate parameter names: {dupes}")
        if len(self.default.assignment) != len(self.parameters):
            raise ValueError("default must assign exactly one value per parameter")
        for p, a in zip(self.parameters, self.default.assignment):
            if not 0 <= a < len(p.values):
                raise ValueError(f"default value index {a} out of range for {p.name}")
        if self.index_of(self.default.assignment) != self.default.index:
            raise ValueError("default index does not match its assignment")
        return self

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(p.values) for p in self.parameters)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.parameters)

    def parameter(self, name: str) -> ParameterDef:
        for p in self.parameters:
            if p.name == name:
                return p
        raise ConfigurationError(f"unknown parameter {name!r}")

    # --- Mixed-radix encoding ---

    def index_of(self, assignment: Sequence[int]) -> int:
        dims = self.dims
        if len(assignment) != len(dims):
            raise ConfigurationError(f"assignment has {len(assignment)} values, space has {len(dims)} parameters")
        index = 0
        for p, a, d in zip(self.parameters, assignment, dims):
            if not 0 <= int(a) < d:
                raise ConfigurationError(f"{p.name}: value index {a} out of range [0, {d})")
            index = index * d + int(a)
        return index

    def config_at(self, index: int) -> Configuration:
        size = self.size
        if not 0 <= int(index) < size:
            raise ConfigurationError(f"configuration index {index} out of range [0, {size})")
        rest = int(index)
        digits = []
        for d in reversed(self.dims):
            rest, a = divmod(rest, d)
            digits.append(a)
        return Configuration(index=int(index), assignment=tuple(reversed(digits)))

    def configurations(self) -> Iterator[Configuration]:
        """All configurations in ascending index order, one at a time."""
        ranges = [range(d) for d in self.dims]
        for i, assignment in enumerate(itertools.product(*ranges)):
            yield Configuration(index=i, assignment=assignment)

    def decode(self, indices: np.ndarray | Sequence[int]) -> np.ndarray:
        """Vectorised config_at: (n,) indices -> (n, n_params) value indices."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise ConfigurationError("configuration index out of range")
        return np.stack(np.unravel_index(idx, self.dims), axis=-1)

    # --- Tokens ---

    def tokens(self, config: Configuration) -> dict[str, str]:
        return {p.name: p.values[a] for p, a in zip(self.parameters, config.assignment)}

    def describe(self, config: Configuration) -> str:
        return ";".join(f"{k}={v}" for k, v in self.tokens(config).items())

    def config_from_tokens(self, tokens: Mapping[str, str]) -> Configuration:
        unknown = set(tokens) - set(self.names)
        if unknown:
            raise ConfigurationError(f"unknown parameters: {sorted(unknown)}")
        missing = [n for n in self.names if n not in tokens]
        if missing:
            raise ConfigurationError(f"missing values for: {missing}")
        assignment = tuple(p.value_index(str(tokens[p.name])) for p in self.parameters)
        return Configuration(index=self.index_of(assignment), assignment=assignment)


def enumerate_configs(space: ConfigSpace) -> Iterator[Configuration]:
    return space.configurations()


def index_of(space: ConfigSpace, assignment: Sequence[int]) -> int:
    return space.index_of(assignment)


def config_at(space: ConfigSpace, index: int) -> Configuration:
    return space.config_at(index)
