"""Evaluation metrics and report files."""

from .metrics import distance_from_oracle, gain_report, performance_gain, topk_overlap, transfer_distance
from .models import GainReport, RegretCurve
from .regret import arm_means, bound_curve, play_count_regret, regret_curve, ucb_regret_bound
from .report import ReportArtifacts, dump_surface, emit_report, read_key_values, read_surface_dump, read_trace
from .study import FidelityTransfer, RegretEnvelope, SamplingSummary, fidelity_transfer, regret_envelope, sampling_summary

__all__ = [
    "FidelityTransfer",
    "GainReport",
    "RegretCurve",
    "RegretEnvelope",
    "ReportArtifacts",
    "SamplingSummary",
    "arm_means",
    "bound_curve",
    "distance_from_oracle",
    "dump_surface",
    "emit_report",
    "fidelity_transfer",
    "gain_report",
    "performance_gain",
    "play_count_regret",
    "read_key_values",
    "read_surface_dump",
    "read_trace",
    "regret_curve",
    "regret_envelope",
    "sampling_summary",
    "topk_overlap",
    "transfer_distance",
    "ucb_regret_bound",
]
