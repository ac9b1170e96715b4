"""The tuning loop: select, evaluate, update for T rounds."""

from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from typing import Callable, Optional, Sequence

from errors import AnalysisError, ConfigurationError, PartialRunError
from executor.models import Sample
from space import ConfigSpace, Configuration
from .logger import RunLogger
from .models import BanditState, TraceRecord, TuneReport, Weights
from .ucb import reward, select_index, update

Evaluator = Callable[[Configuration], Sample]
EvaluatorFactory = Callable[[int], Evaluator]


def run(
    space: ConfigSpace,
    evaluator: Evaluator,
    weights: Weights,
    T: int,
    seed: int,
    *,
    logger: Optional[RunLogger] = None,
    settings: Optional[dict] = None,
) -> TuneReport:
    """Play T rounds and return the most-played configuration (ties: lowest index).

    An evaluator failure raises PartialRunError carrying every completed round.
    """
    if T < 1:
        raise ConfigurationError(f"iterations must be >= 1, got {T}")
    if seed < 0:
        raise ConfigurationError(f"seed must be >= 0, got {seed}")
    settings = dict(settings or {})
    settings.setdefault("alpha", weights.alpha)
    settings.setdefault("beta", weights.beta)
    settings.setdefault("iterations", T)
    settings.setdefault("seed", seed)

    state = BanditState(space=space, rng_seed=seed)
    trace: list[TraceRecord] = []
    if logger:
        logger.log_start(settings)

    for _ in range(T):
        t = state.t
        index, ucb = select_index(state, weights)
        config = space.config_at(index)
        if logger:
            logger.log_select(t, index, ucb)
        try:
            sample = evaluator(config)
            if logger:
                logger.log_sample(t, index, sample.exec_time, sample.power)
            update(state, index, sample)
        except Exception as e:
            if logger:
                logger.log_error(f"round {t}, {space.describe(config)}: {e}")
            raise PartialRunError(f"round {t} failed for {space.describe(config)}: {e}", trace, e) from e

        arm = state.arms[index]
        r = reward(arm, weights, state.minmax)
        arm.record_reward(r)
        trace.append(TraceRecord(
            t=t,
            arm_index=index,
            config=space.describe(config),
            raw_time=sample.exec_time,
            raw_power=sample.power,
            reward=r,
            ucb=ucb,
        ))
        if logger:
            logger.log_update(t, index, r, arm.pulls)

    counts = {i: arm.pulls for i, arm in sorted(state.arms.items())}
    best = min(counts, key=lambda i: (-counts[i], i))
    x_opt = space.config_at(best)
    if logger:
        logger.log_complete(best, counts[best])
    return TuneReport(
        x_opt=x_opt,
        x_opt_label=space.describe(x_opt),
        trace=trace,
        final_counts=counts,
        settings=settings,
        arms=state.arms,
    )


def expected_total_reward(runs: Sequence[TuneReport] | Sequence[Sequence[TraceRecord]]) -> float:
    """Mean over runs of the summed per-round reward."""
    if not runs:
        raise AnalysisError("no runs to average")
    totals = []
    for r in runs:
        trace = r.trace if isinstance(r, TuneReport) else r
        totals.append(sum(rec.reward for rec in trace))
    return sum(totals) / len(totals)


def _replicate(args: tuple) -> TuneReport:
    space, factory, weights, T, run_seed, settings, log_label = args
    logger = RunLogger(log_label) if log_label else None
    return run(space, factory(run_seed), weights, T, run_seed, logger=logger, settings=settings)


def run_replications(
    space: ConfigSpace,
    factory: EvaluatorFactory,
    weights: Weights,
    T: int,
    seed: int,
    replications: int,
    *,
    jobs: int = 1,
    log_label: Optional[str] = None,
    settings: Optional[dict] = None,
) -> list[TuneReport]:
    """Independent runs with seeds seed, seed+1, ...; results in seed order.

    With jobs > 1 runs are spread over processes, so `factory` must be picklable.
    """
    if replications < 1:
        raise ConfigurationError(f"replications must be >= 1, got {replications}")
    tasks = []
    for i in range(replications):
        run_seed = seed + i
        s = dict(settings or {}, seed=run_seed)
        label = f"{log_label}_s{run_seed}" if log_label else None
        tasks.append((space, factory, weights, T, run_seed, s, label))
    if jobs <= 1 or replications == 1:
        return [_replicate(task) for task in tasks]
    try:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_replicate, tasks))
    except BrokenProcessPool as e:
        raise PartialRunError(f"a replication worker died: {e}", [], e) from e
