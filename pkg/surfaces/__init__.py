"""Synthetic landscapes standing in for real benchmark runs."""

from .fidelity import DEFAULT_FIDELITY, FidelityMap, fidelity_to_cells
from .landscape import PRESET_SCALES, SyntheticSurface, make_surface, ranking, sweep
from .oracle import OracleResult, guard, oracle

__all__ = [
    "DEFAULT_FIDELITY",
    "FidelityMap",
    "OracleResult",
    "PRESET_SCALES",
    "SyntheticSurface",
    "fidelity_to_cells",
    "guard",
    "make_surface",
    "oracle",
    "ranking",
    "sweep",
]
