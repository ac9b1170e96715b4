"""UCB1 bandit over configurations."""

from .logger import RunLogger
from .models import ArmStats, BanditState, TraceRecord, TuneReport, Weights
from .runner import expected_total_reward, run, run_replications
from .ucb import exploration_bonus, normalize, reward, select, select_index, ucb_scores, ucb_value, update, weighted_reward

__all__ = [
    "ArmStats",
    "BanditState",
    "RunLogger",
    "TraceRecord",
    "TuneReport",
    "Weights",
    "expected_total_reward",
    "exploration_bonus",
    "normalize",
    "reward",
    "run",
    "run_replications",
    "select",
    "select_index",
    "ucb_scores",
    "ucb_value",
    "update",
    "weighted_reward",
]
