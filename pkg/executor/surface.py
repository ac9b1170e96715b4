"""Evaluate configurations against a synthetic surface instead of a real run."""

from __future__ import annotations

from space import Configuration
from surfaces import SyntheticSurface
from .models import NoiseSpec, Sample, check_sample
from .noise import perturb


def evaluate_surface(
    surface: SyntheticSurface,
    config: Configuration,
    q: float,
    noise: NoiseSpec = NoiseSpec(),
    draw_index: int = 0,
) -> Sample:
    """Pure function of its arguments: the same draw index gives the same sample."""
    surface.space.config_at(config.index)
    exec_time, power = perturb(surface.time(config, q), surface.power(config, q), noise, draw_index)
    return check_sample(Sample(
        config_index=config.index,
        exec_time=exec_time,
        power=power,
        fidelity=q,
        noise_applied=noise.level,
    ))


class SurfaceEvaluator:
    """Evaluator closure over a surface; each call advances the draw index."""

    def __init__(self, surface: SyntheticSurface, q: float, noise: NoiseSpec = NoiseSpec()):
        surface.fidelity.check(q)
        self.surface = surface
        self.q = q
        self.noise = noise
        self.draws = 0

    def __call__(self, config: Configuration) -> Sample:
        draw = self.draws
        self.draws += 1
        return evaluate_surface(self.surface, config, self.q, self.noise, draw)


class SurfaceEvaluatorFactory:
    """Picklable builder of per-replication evaluators (noise seed = run seed)."""

    def __init__(self, surface: SyntheticSurface, q: float, noise: NoiseSpec = NoiseSpec()):
        self.surface = surface
        self.q = q
        self.noise = noise

    def __call__(self, run_seed: int) -> SurfaceEvaluator:
        return SurfaceEvaluator(self.surface, self.q, self.noise.model_copy(update={"seed": run_seed}))
