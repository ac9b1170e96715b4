"""Measurement: run a configuration and return (time, power).

Surface-backed evaluation lives in `executor.surface`.
"""

from .command import CommandEvaluator, build_argv, check_template, evaluate_command
from .models import NoiseSpec, Sample, check_sample
from .noise import apply_noise, perturb
from .probes import ConstantProbe, FileSampler, ModelProbe, PowerProbe, ProbeSampler, make_probe

__all__ = [
    "CommandEvaluator",
    "ConstantProbe",
    "FileSampler",
    "ModelProbe",
    "NoiseSpec",
    "PowerProbe",
    "ProbeSampler",
    "Sample",
    "apply_noise",
    "build_argv",
    "check_sample",
    "check_template",
    "evaluate_command",
    "make_probe",
    "perturb",
]
