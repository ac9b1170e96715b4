"""UCB selection, updates and the tuning loop."""

from __future__ import annotations
import math
import pickle

import numpy as np
import pytest
from pydantic import ValidationError

from bandit import (
    ArmStats,
    BanditState,
    RunLogger,
    Weights,
    expected_total_reward,
    exploration_bonus,
    normalize,
    reward,
    run,
    run_replications,
    select,
    select_index,
    ucb_value,
    update,
    weighted_reward,
)
from bandit import ucb as ucb_module
from errors import AnalysisError, ConfigurationError, ExecutionFault, MeasurementError, PartialRunError, SpaceParseError
from executor import NoiseSpec, Sample
from executor.surface import SurfaceEvaluatorFactory
from space import parse_space
from conftest import FailingEvaluator, TableEvaluator


def _sample(i: int, t: float, p: float) -> Sample:
    return Sample(config_index=i, exec_time=t, power=p)


def _arm(times: list[float], powers: list[float]) -> ArmStats:
    arm = ArmStats()
    for t, p in zip(times, powers):
        arm.add(t, p)
    return arm


# --- Formulas ---

def test_weights_bounds():
    assert Weights() == Weights(alpha=0.8, beta=0.2)
    with pytest.raises(ValidationError):
        Weights(alpha=1.5)
    with pytest.raises(ValidationError):
        Weights(beta=-0.1)


def test_normalize():
    assert normalize([], (0.0, 1.0)).size == 0
    assert normalize([2.0, 4.0, 3.0], (2.0, 4.0)).tolist() == [0.0, 1.0, 0.5]
    assert normalize([3.0, 3.0], (3.0, 3.0)).tolist() == [0.0, 0.0]


def test_reward_floors_zero_means():
    arm = _arm([1.0], [5.0])
    minmax = ((1.0, 4.0), (2.0, 5.0))
    # time mean normalizes to 0 (floored), power to 1
    assert reward(arm, Weights(), minmax) == pytest.approx(0.8 / 1e-6 + 0.2)


def test_reward_requires_a_pull():
    with pytest.raises(ConfigurationError):
        reward(ArmStats(), Weights(), ((0.0, 1.0), (0.0, 1.0)))


def test_ucb_value_reference():
    arm = _arm([3.0] * 4, [1.0] * 4)
    minmax = ((1.0, 3.0), (1.0, 2.0))
    value = ucb_value(arm, 8, Weights(alpha=0.5, beta=0.0), minmax)
    assert value == pytest.approx(0.5 + math.sqrt(2 * math.log(8) / 4), abs=1e-9)
    assert value == pytest.approx(1.51967, abs=1e-5)
    assert float(exploration_bonus(8, 4)) == pytest.approx(1.01966699, abs=1e-7)


def test_ucb_value_edges():
    assert ucb_value(ArmStats(), 5, Weights(), (None, None)) == math.inf
    arm = _arm([2.0], [3.0])
    with pytest.raises(ConfigurationError):
        ucb_value(arm, 0, Weights(), ((2.0, 2.0), (3.0, 3.0)))
    # t == 1: no exploration bonus
    assert ucb_value(arm, 1, Weights(), ((1.0, 2.0), (2.0, 3.0))) == pytest.approx(0.8 + 0.2)


# --- State ---

def test_update_keeps_invariants(toy_space):
    state = BanditState(space=toy_space, rng_seed=0)
    update(state, 1, _sample(1, 2.0, 5.0))
    update(state, 1, _sample(1, 3.0, 4.0))
    update(state, 0, _sample(0, 1.0, 6.0))
    assert state.t == 4
    assert sum(a.pulls for a in state.arms.values()) == state.t - 1
    assert state.global_time_minmax == (1.0, 3.0)
    assert state.global_power_minmax == (4.0, 6.0)
    assert state.arms[1].mean_time == 2.5
    assert 2 not in state.arms


def test_update_rejects_bad_samples(toy_space):
    state = BanditState(space=toy_space)
    for bad in (_sample(0, 0.0, 1.0), _sample(0, 1.0, float("nan"))):
        with pytest.raises(MeasurementError):
            update(state, 0, bad)
    assert state.t == 1 and not state.arms and state.global_time_minmax is None
    with pytest.raises(ConfigurationError):
        update(state, 5, _sample(5, 1.0, 1.0))
    with pytest.raises(ConfigurationError):
        update(state, 0, _sample(1, 1.0, 1.0))


def test_state_table_grows(ten_arm_space):
    state = BanditState(space=ten_arm_space)
    state._ids = state._ids[:2]
    state._pulls, state._time_sum, state._power_sum = (a[:2] for a in (state._pulls, state._time_sum, state._power_sum))
    for i in range(10):
        update(state, i, _sample(i, 1.0 + i, 2.0))
    ids, pulls, time_sum, _ = state.table()
    assert sorted(ids.tolist()) == list(range(10))
    assert pulls.sum() == 10
    assert time_sum.sum() == pytest.approx(sum(1.0 + i for i in range(10)))


# --- Selection ---

def test_cold_arms_first(toy_space, toy_evaluator):
    state = BanditState(space=toy_space, rng_seed=3)
    seen = []
    for _ in range(3):
        config = select(state, Weights())
        assert config.index not in seen
        seen.append(config.index)
        update(state, config.index, toy_evaluator(config))
    assert sorted(seen) == [0, 1, 2]


def test_selection_is_affine_invariant(toy_space):
    def pick(scale: float, shift: float) -> list[int]:
        state = BanditState(space=toy_space, rng_seed=11)
        evaluator = TableEvaluator([scale * t + shift for t in (2.0, 1.0, 3.0)],
                                   [scale * p + shift for p in (5.0, 6.0, 4.0)])
        out = []
        for _ in range(30):
            index, _ = select_index(state, Weights())
            out.append(index)
            update(state, index, evaluator(toy_space.config_at(index)))
        return out

    assert pick(1.0, 0.0) == pick(3.0, 7.0)


def test_cold_pick_by_rejection(ten_arm_space, monkeypatch):
    monkeypatch.setattr(ucb_module, "COLD_ENUMERATION_LIMIT", 1)
    state = BanditState(space=ten_arm_space, rng_seed=1)
    seen = set()
    for _ in range(10):
        index, value = select_index(state, Weights())
        assert value == math.inf and index not in seen
        seen.add(index)
        update(state, index, _sample(index, 1.0 + index, 2.0))
    assert seen == set(range(10))


def test_single_arm_space():
    space = parse_space("[space]\nonly = {only} | x\n")
    report = run(space, TableEvaluator([1.0], [1.0]), Weights(), 5, 0)
    assert report.final_counts == {0: 5}


def test_ties_are_broken_evenly():
    space = parse_space("[space]\nx = {x} | a, b\n")
    state = BanditState(space=space, rng_seed=5)
    update(state, 0, _sample(0, 2.0, 3.0))
    update(state, 1, _sample(1, 2.0, 3.0))
    picks = [select_index(state, Weights())[0] for _ in range(10_000)]
    assert abs(sum(picks) / len(picks) - 0.5) < 0.03


def test_reward_decreases_in_each_mean():
    means = np.linspace(0.01, 1.0, 50)
    w = Weights(alpha=0.6, beta=0.4)
    assert np.all(np.diff(weighted_reward(means, 0.5, w)) < 0)
    assert np.all(np.diff(weighted_reward(0.5, means, w)) < 0)
    minmax = ((1.0, 5.0), (1.0, 5.0))
    slower = [reward(_arm([t], [3.0]), w, minmax) for t in (2.0, 3.0, 4.0, 5.0)]
    assert slower == sorted(slower, reverse=True) and len(set(slower)) == 4


# --- Runs ---

def test_run_exploits_the_fastest_arm(toy_space, toy_evaluator):
    report = run(toy_space, toy_evaluator, Weights(), 50, seed=42)
    assert report.x_opt.index == 1
    assert sum(report.final_counts.values()) == 50
    assert len(report.trace) == 50
    assert [r.t for r in report.trace] == list(range(1, 51))
    assert all(r.ucb == math.inf for r in report.trace[:3])
    assert report.final_counts[1] == 48


def test_more_arms_than_rounds(ten_arm_space):
    evaluator = TableEvaluator([1.0 + k for k in range(10)], [2.0] * 10)
    report = run(ten_arm_space, evaluator, Weights(), 6, seed=8)
    assert len(report.final_counts) == 6
    assert set(report.final_counts.values()) == {1}
    assert len(set(evaluator.calls)) == 6


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fastest_arm_is_played_most(ten_arm_space, seed):
    order = [3, 7, 0, 9, 5, 1, 8, 2, 6, 4]
    times = [1.1 ** r for r in order]
    powers = [5.0, 4.2, 5.4, 4.6, 3.9, 5.8, 4.4, 5.2, 6.0, 4.8]
    report = run(ten_arm_space, TableEvaluator(times, powers), Weights(), 500, seed=seed)
    fastest = times.index(min(times))
    others = [n for i, n in report.final_counts.items() if i != fastest]
    assert report.final_counts[fastest] > max(others)
    assert report.x_opt.index == fastest


def test_power_focused_run_prefers_low_power(toy_space, toy_evaluator):
    report = run(toy_space, toy_evaluator, Weights(alpha=0.2, beta=0.8), 50, seed=42)
    assert report.x_opt.index == 2


def test_run_is_deterministic(kripke_surface):
    factory = SurfaceEvaluatorFactory(kripke_surface, 1.0, NoiseSpec(level=0.1))
    a = run(kripke_surface.space, factory(7), Weights(), 300, seed=7)
    b = run(kripke_surface.space, factory(7), Weights(), 300, seed=7)
    assert a.trace == b.trace
    assert a.to_text() == b.to_text()


def test_run_argument_checks(toy_space, toy_evaluator):
    with pytest.raises(ConfigurationError):
        run(toy_space, toy_evaluator, Weights(), 0, seed=1)
    with pytest.raises(ConfigurationError):
        run(toy_space, toy_evaluator, Weights(), 10, seed=-1)


def test_partial_run_keeps_completed_rounds(toy_space):
    evaluator = FailingEvaluator([2.0, 1.0, 3.0], [5.0, 6.0, 4.0], fail_on=4)
    with pytest.raises(PartialRunError) as e:
        run(toy_space, evaluator, Weights(), 10, seed=0)
    assert len(e.value.trace) == 3
    assert isinstance(e.value.cause, RuntimeError)


def test_x_opt_tie_goes_to_lowest_index(toy_space):
    report = run(toy_space, TableEvaluator([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]), Weights(), 3, seed=5)
    assert report.final_counts == {0: 1, 1: 1, 2: 1}
    assert report.x_opt.index == 0


def test_report_text(toy_space, toy_evaluator):
    report = run(toy_space, toy_evaluator, Weights(), 10, seed=1, settings={"preset": "toy"})
    text = report.to_text()
    assert text.startswith("x_opt_index=1\nx_opt=x=b\n")
    assert "preset=toy\n" in text
    assert "seed=1\n" in text
    assert report.counts_by_assignment(toy_space)["x=b"] == report.final_counts[1]


def test_expected_total_reward(toy_space, toy_evaluator):
    reports = [run(toy_space, toy_evaluator, Weights(), 10, seed=s) for s in (1, 2)]
    expected = (reports[0].total_reward + reports[1].total_reward) / 2
    assert expected_total_reward(reports) == pytest.approx(expected)
    assert expected_total_reward([r.trace for r in reports]) == pytest.approx(expected)
    with pytest.raises(AnalysisError):
        expected_total_reward([])


def test_replications_use_consecutive_seeds(kripke_surface):
    factory = SurfaceEvaluatorFactory(kripke_surface, 1.0, NoiseSpec(level=0.05))
    reports = run_replications(kripke_surface.space, factory, Weights(), 250, seed=10, replications=3)
    assert [r.settings["seed"] for r in reports] == [10, 11, 12]
    single = run(kripke_surface.space, factory(11), Weights(), 250, seed=11)
    assert reports[1].trace == single.trace


@pytest.mark.slow
def test_replications_in_processes_match_serial(kripke_surface):
    factory = SurfaceEvaluatorFactory(kripke_surface, 1.0, NoiseSpec(level=0.05))
    serial = run_replications(kripke_surface.space, factory, Weights(), 250, seed=3, replications=4)
    pooled = run_replications(kripke_surface.space, factory, Weights(), 250, seed=3, replications=4, jobs=2)
    assert [r.trace for r in serial] == [r.trace for r in pooled]


class _FailingSeedFactory:
    """Evaluators for a toy space; the run with `bad_seed` crashes on its third round."""

    def __init__(self, bad_seed: int):
        self.bad_seed = bad_seed

    def __call__(self, run_seed: int):
        if run_seed == self.bad_seed:
            return FailingEvaluator([2.0, 1.0, 3.0], [5.0, 6.0, 4.0], fail_on=3)
        return TableEvaluator([2.0, 1.0, 3.0], [5.0, 6.0, 4.0])


def test_failure_in_a_worker_process_keeps_the_partial_trace(toy_space):
    with pytest.raises(PartialRunError) as info:
        run_replications(toy_space, _FailingSeedFactory(bad_seed=1), Weights(), 10, seed=0, replications=2, jobs=2)
    assert len(info.value.trace) == 2
    assert isinstance(info.value.cause, RuntimeError)
    assert info.value.exit_status == 3


def test_errors_survive_pickling():
    fault = ExecutionFault("exit 7", returncode=7, output="boom")
    err = pickle.loads(pickle.dumps(PartialRunError("round 3 failed", [], fault)))
    assert str(err) == "round 3 failed"
    assert err.cause.returncode == 7 and err.cause.output == "boom"
    parse = pickle.loads(pickle.dumps(SpaceParseError("bad value", 4, "x = {x} |", "x")))
    assert (parse.line_no, parse.parameter) == (4, "x")
    assert str(parse) == str(SpaceParseError("bad value", 4, "x = {x} |", "x"))


def test_run_logger(tmp_path, monkeypatch, toy_space, toy_evaluator):
    import bandit.logger as logger_module
    monkeypatch.setattr(logger_module, "LOGS_DIR", tmp_path)
    logger = RunLogger("toy")
    run(toy_space, toy_evaluator, Weights(), 5, seed=0, logger=logger)
    summary = logger.get_summary()
    assert summary["rounds"] == 5
    assert summary["distinct_arms"] == 3
    assert summary["errors"] == 0
    actions = [e["action"] for e in logger.entries]
    assert actions[0] == "start" and actions[-1] == "complete"
    lines = logger.log_file.read_text().splitlines()
    assert len(lines) == len(logger.entries)
