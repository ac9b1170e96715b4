"""Discrete configuration search spaces."""

from .models import (
    CommandSpec,
    ConfigSpace,
    Configuration,
    ParameterDef,
    config_at,
    enumerate_configs,
    index_of,
)
from .parser import PRESETS, load_space, parse_space, preset_space

__all__ = [
    "CommandSpec",
    "ConfigSpace",
    "Configuration",
    "ParameterDef",
    "PRESETS",
    "config_at",
    "enumerate_configs",
    "index_of",
    "load_space",
    "parse_space",
    "preset_space",
]
