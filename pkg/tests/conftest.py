"""Shared fixtures: small spaces, table-driven evaluators, preset surfaces."""

from __future__ import annotations

import pytest

from executor import Sample
from space import Configuration, parse_space
from surfaces import make_surface

TOY_SPACE = """
[space]
x = {x} | a, b, c
"""

GRID_SPACE = """
# two parameters, 3 x 4
[space]
p = {p} | 1-3
r = {r} | lo, mid, high, max
[default]
p = 2
r = mid
"""

TEN_ARM_SPACE = """
[space]
k = {k} | 0-9
"""


class TableEvaluator:
    """Deterministic evaluator reading (time, power) from per-arm lists."""

    def __init__(self, times: list[float], powers: list[float]):
        self.times = times
        self.powers = powers
        self.calls: list[int] = []

    def __call__(self, config: Configuration) -> Sample:
        self.calls.append(config.index)
        return Sample(
            config_index=config.index,
            exec_time=self.times[config.index],
            power=self.powers[config.index],
        )


class FailingEvaluator(TableEvaluator):
    """Fails on the given call number (1-based)."""

    def __init__(self, times, powers, fail_on: int):
        super().__init__(times, powers)
        self.fail_on = fail_on

    def __call__(self, config: Configuration) -> Sample:
        if len(self.calls) + 1 == self.fail_on:
            self.calls.append(config.index)
            raise RuntimeError("workload crashed")
        return super().__call__(config)


@pytest.fixture
def toy_space():
    return parse_space(TOY_SPACE, name="toy")


@pytest.fixture
def grid_space():
    return parse_space(GRID_SPACE, name="grid")


@pytest.fixture
def ten_arm_space():
    return parse_space(TEN_ARM_SPACE, name="ten")


@pytest.fixture
def toy_evaluator():
    # arm 1 is fastest, arm 2 draws least power
    return TableEvaluator([2.0, 1.0, 3.0], [5.0, 6.0, 4.0])


@pytest.fixture(scope="session")
def kripke_surface():
    return make_surface("kripke")


@pytest.fixture(scope="session")
def clomp_surface():
    return make_surface("clomp")


@pytest.fixture(scope="session")
def lulesh_surface():
    return make_surface("lulesh")
