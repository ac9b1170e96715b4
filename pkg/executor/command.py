"""Run a workload command for one configuration and measure it.

The template carries one substitution token per parameter (and optionally {q}
for the fidelity). Tokens are substituted inside already-split arguments, so
values are never re-parsed by a shell.
"""

from __future__ import annotations
import shlex
import subprocess
import time
from contextlib import suppress
from typing import Optional

from config import COMMAND_TIMEOUT_S, PROBE_INTERVAL_MS
from errors import ContractError, ExecutionFault, ProbeError
from space import ConfigSpace, Configuration
from .models import NoiseSpec, Sample, check_sample
from .noise import perturb
from .probes import PowerProbe, ProbeSampler

FIDELITY_TOKEN = "{q}"


def check_template(template: str, space: ConfigSpace, fidelity: Optional[float] = None) -> list[str]:
    """Validate the command contract and return the split argument list."""
    if not template.strip():
        raise ContractError("empty command template")
    for p in space.parameters:
        n = template.count(p.substitution_token)
        if n != 1:
            raise ContractError(
                f"token {p.substitution_token} for parameter '{p.name}' appears {n} times in template (expected 1)"
            )
    if FIDELITY_TOKEN in template and fidelity is None:
        raise ContractError("template uses {q} but no fidelity was given")
    try:
        return shlex.split(template)
    except ValueError as e:
        raise ContractError(f"cannot split template: {e}") from None


def build_argv(template: str, config: Configuration, space: ConfigSpace, fidelity: Optional[float] = None) -> list[str]:
    argv = check_template(template, space, fidelity)
    subs = {p.substitution_token: tok for p, tok in zip(space.parameters, space.tokens(config).values())}
    if fidelity is not None:
        subs[FIDELITY_TOKEN] = repr(float(fidelity))
    out = []
    for arg in argv:
        for token, value in subs.items():
            arg = arg.replace(token, value)
        out.append(arg)
    return out


def evaluate_command(
    template: str,
    config: Configuration,
    probe: PowerProbe,
    noise: NoiseSpec,
    *,
    space: ConfigSpace,
    fidelity: Optional[float] = None,
    draw_index: int = 0,
    timeout: Optional[float] = COMMAND_TIMEOUT_S,
    poll_ms: int = PROBE_INTERVAL_MS,
) -> Sample:
    """Spawn the workload, time it with a monotonic clock and average the probe while it runs."""
    argv = build_argv(template, config, space, fidelity)

    sampler = ProbeSampler(probe, poll_ms)
    start = time.perf_counter()
    try:
        proc = subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
    except OSError as e:
        raise ExecutionFault(f"cannot spawn {argv[0]!r}: {e}") from e
    sampler.start()
    try:
        output, _ = proc.communicate(timeout=timeout)
    except subprocess.TimeoutExpired:
        proc.kill()
        output, _ = proc.communicate()
        with suppress(ProbeError):
            sampler.stop()
        raise ExecutionFault(f"{argv[0]!r} timed out after {timeout} s", None, output or "") from None
    elapsed = time.perf_counter() - start

    if proc.returncode != 0:
        with suppress(ProbeError):
            sampler.stop()
        raise ExecutionFault(
            f"{argv[0]!r} exited with status {proc.returncode} for {space.describe(config)}",
            proc.returncode,
            output or "",
        )
    power = sampler.stop()

    exec_time, power = perturb(elapsed, power, noise, draw_index)
    return check_sample(Sample(
        config_index=config.index,
        exec_time=exec_time,
        power=power,
        fidelity=1.0 if fidelity is None else float(fidelity),
        noise_applied=noise.level,
    ))


class CommandEvaluator:
    """Evaluator closure over a command template; each call is one draw."""

    def __init__(
        self,
        space: ConfigSpace,
        template: str,
        probe: PowerProbe,
        noise: NoiseSpec = NoiseSpec(),
        fidelity: Optional[float] = None,
        timeout: Optional[float] = COMMAND_TIMEOUT_S,
        poll_ms: int = PROBE_INTERVAL_MS,
    ):
        check_template(template, space, fidelity)
        self.space = space
        self.template = template
        self.probe = probe
        self.noise = noise
        self.fidelity = fidelity
        self.timeout = timeout
        self.poll_ms = poll_ms
        self.draws = 0

    def __call__(self, config: Configuration) -> Sample:
        draw = self.draws
        self.draws += 1
        return evaluate_command(
            self.template, config, self.probe, self.noise,
            space=self.space, fidelity=self.fidelity, draw_index=draw,
            timeout=self.timeout, poll_ms=self.poll_ms,
        )
