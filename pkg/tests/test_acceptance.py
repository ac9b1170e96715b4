"""Multi-replication quality checks on the preset surfaces."""

from __future__ import annotations

import numpy as np
import pytest

from analysis import sampling_summary
from bandit import Weights, run, run_replications
from executor import NoiseSpec
from executor.surface import SurfaceEvaluatorFactory
from surfaces import make_surface, oracle

pytestmark = pytest.mark.slow

RUNS = 100
T = 500


def _replicate(surface, weights: Weights, noise: float = 0.0, seed: int = 42):
    factory = SurfaceEvaluatorFactory(surface, 1.0, NoiseSpec(level=noise))
    return run_replications(surface.space, factory, weights, T, seed, RUNS)


def test_kripke_lands_near_the_oracle(kripke_surface):
    reports = _replicate(kripke_surface, Weights(alpha=0.8, beta=0.2))
    summary = sampling_summary(reports, kripke_surface, 1.0, "time")
    assert summary.mean_distance <= 12.0
    assert summary.within(12.0) >= 90


@pytest.mark.parametrize("preset", ["kripke", "lulesh", "clomp"])
def test_small_spaces_find_the_time_oracle(preset):
    surface = make_surface(preset)
    best = oracle(surface, 1.0, "time").config.index
    reports = _replicate(surface, Weights(alpha=1.0, beta=0.0))
    hits = sum(1 for r in reports if r.x_opt.index == best)
    assert hits >= 95


def test_gain_survives_noise(kripke_surface):
    reports = _replicate(kripke_surface, Weights(alpha=0.8, beta=0.2), noise=0.15)
    summary = sampling_summary(reports, kripke_surface, 1.0, "time")
    assert summary.improved() >= 90


def test_replication_seeds_are_distinct(kripke_surface):
    reports = _replicate(kripke_surface, Weights(), noise=0.05)
    seeds = [r.settings["seed"] for r in reports]
    assert seeds == list(range(42, 42 + RUNS))
    first_arms = {r.trace[0].arm_index for r in reports}
    assert len(first_arms) > 1
    assert all(sum(r.final_counts.values()) == T for r in reports)
    assert all(len(r.final_counts) == kripke_surface.size for r in reports)
    assert np.all([r.trace[i].ucb == np.inf for r in reports[:5] for i in range(kripke_surface.size)])


def test_long_run_plays_the_fastest_arm_most(kripke_surface):
    factory = SurfaceEvaluatorFactory(kripke_surface, 1.0, NoiseSpec())
    report = run(kripke_surface.space, factory(7), Weights(alpha=1.0, beta=0.0), 50_000, seed=7)
    best = oracle(kripke_surface, 1.0, "time").config.index
    assert max(report.final_counts, key=report.final_counts.get) == best
