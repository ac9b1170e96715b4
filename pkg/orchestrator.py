"""Command-line entry for the bandit autotuner.

Usage:
    python -m orchestrator tune --preset kripke -T 500 -o out/          # Tune on a synthetic surface
    python -m orchestrator tune --space app.space --mode command -o out/ # Tune a real workload
    python -m orchestrator oracle --preset clomp -q 0.2 -o out/         # Exhaustive ground truth
    python -m orchestrator analyze regret --trace out/trace.csv         # Regret vs. the UCB bound
    python -m orchestrator analyze gain --trace out/trace.csv --default-index 37
    python -m orchestrator analyze overlap --dump-a low.csv --dump-b high.csv -k 20
    python -m orchestrator analyze transfer --dump-a low.csv --dump-b high.csv -k 20
"""

from __future__ import annotations
import argparse
import sys
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from rich.console import Console

from analysis import (
    ReportArtifacts,
    arm_means,
    bound_curve,
    dump_surface,
    emit_report,
    gain_report,
    read_key_values,
    read_surface_dump,
    read_trace,
    regret_curve,
    regret_envelope,
    sampling_summary,
    topk_overlap,
    transfer_distance,
)
from analysis.report import DUMP_HEADER, Table, format_float, regret_table, write_files
from bandit import TuneReport, Weights, expected_total_reward, run_replications
from config import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_FIDELITY_CORRELATION,
    DEFAULT_ITERATIONS,
    DEFAULT_REPLICATIONS,
    DEFAULT_SEED,
    DEFAULT_STRUCTURE_SEED,
    OUTPUT_DIR,
    PROBE_INTERVAL_MS,
)
from errors import AnalysisError, ConfigurationError, OracleGuardError, PartialRunError, TunerError
from executor import CommandEvaluator, NoiseSpec, check_template, make_probe
from executor.surface import SurfaceEvaluatorFactory
from space import PRESETS, ConfigSpace, load_space, preset_space
from surfaces import SyntheticSurface, guard, make_surface, oracle, ranking

console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)

# Published table size for Lulesh; the listed ranges multiply to 120
LULESH_STATED_SIZE = 128


class RunSettings(BaseModel):
    """Validated inputs of a tune/oracle invocation."""
    model_config = ConfigDict(frozen=True)

    preset: Optional[str] = None
    space_file: Optional[Path] = None
    mode: Literal["surface", "command"] = "surface"
    iterations: int = Field(DEFAULT_ITERATIONS, ge=1)
    alpha: float = Field(DEFAULT_ALPHA, ge=0, le=1)
    beta: float = Field(DEFAULT_BETA, ge=0, le=1)
    seed: int = Field(DEFAULT_SEED, ge=0)
    noise: float = Field(0.0, ge=0, le=0.5)
    q: Optional[float] = None
    output_dir: Path = OUTPUT_DIR
    replications: Optional[int] = Field(None, ge=1)
    structure_seed: int = Field(DEFAULT_STRUCTURE_SEED, ge=0)
    fidelity_correlation: float = Field(DEFAULT_FIDELITY_CORRELATION, ge=0, le=1)
    jobs: int = Field(1, ge=1)
    fmt: Literal["csv", "json"] = "csv"
    log: bool = True
    probe: Optional[str] = None
    heatmap: Optional[tuple[str, str]] = None

    @model_validator(mode="after")
    def _one_space(self) -> "RunSettings":
        if (self.preset is None) == (self.space_file is None):
            raise ValueError("give exactly one of --preset or --space")
        if self.preset is not None and self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r} (expected one of {', '.join(PRESETS)})")
        return self

    @property
    def weights(self) -> Weights:
        return Weights(alpha=self.alpha, beta=self.beta)

    @property
    def runs(self) -> int:
        if self.replications is not None:
            return self.replications
        return DEFAULT_REPLICATIONS if self.mode == "surface" else 1

    @property
    def label(self) -> str:
        return self.preset or (self.space_file.stem if self.space_file else "custom")

    def load_space(self) -> ConfigSpace:
        if self.preset:
            return preset_space(self.preset)
        return load_space(self.space_file)

    def surface(self, space: ConfigSpace) -> SyntheticSurface:
        return make_surface(self.preset or "custom", self.structure_seed, self.fidelity_correlation, space=space)

    def echo(self, q: Optional[float]) -> dict:
        """Settings recorded in report.txt (everything that determines the outputs)."""
        out = {
            "mode": self.mode,
            "preset": self.preset or "custom",
            "space": str(self.space_file) if self.space_file else "",
            "alpha": self.alpha,
            "beta": self.beta,
            "iterations": self.iterations,
            "noise": self.noise,
            "q": "" if q is None else q,
            "replications": self.runs,
        }
        if self.mode == "surface":
            out["structure_seed"] = self.structure_seed
            out["fidelity_correlation"] = self.fidelity_correlation
        return out


def _gain_metric(weights: Weights) -> Literal["time", "power"]:
    return "time" if weights.alpha >= weights.beta else "power"


def _observed_mean(report: TuneReport, index: int, metric: str) -> Optional[float]:
    arm = report.arms.get(index)
    if arm is None:
        return None
    return arm.mean_time if metric == "time" else arm.mean_power


def cmd_tune(settings: RunSettings) -> int:
    """Run the bandit loop (settings.runs replications) and write the report files."""
    space = settings.load_space()
    weights = settings.weights
    surface: Optional[SyntheticSurface] = None
    q = settings.q
    jobs = settings.jobs

    if settings.mode == "surface":
        surface = settings.surface(space)
        q = surface.fidelity.check(q if q is not None else surface.fidelity.q_max)
        factory = SurfaceEvaluatorFactory(surface, q, NoiseSpec(level=settings.noise))
        console.print(f"🎯 {surface!r}")
    else:
        if space.command is None:
            raise ConfigurationError("command mode needs a [command] section with a template")
        cmd = space.command
        probe = make_probe(settings.probe or cmd.probe, cmd.poll_ms)
        check_template(cmd.template, space, q)
        if jobs > 1:
            err_console.print("⚠️  command-mode replications run one at a time; ignoring --jobs")
            jobs = 1

        def factory(run_seed: int) -> CommandEvaluator:
            return CommandEvaluator(
                space, cmd.template, probe, NoiseSpec(level=settings.noise, seed=run_seed), q,
                poll_ms=cmd.poll_ms or PROBE_INTERVAL_MS,
            )

    console.print(f"🔍 Tuning {settings.label}: {space.size} configurations, T={settings.iterations}, "
                  f"alpha={weights.alpha}, beta={weights.beta}, {settings.runs} run(s)")
    reports = run_replications(
        space, factory, weights, settings.iterations, settings.seed, settings.runs,
        jobs=jobs,
        log_label=f"{settings.label}_{settings.mode}" if settings.log else None,
        settings=settings.echo(q),
    )
    base = reports[0]
    metric = _gain_metric(weights)
    artifacts = ReportArtifacts(report=base, space=space, heatmap_params=settings.heatmap)

    if surface is not None:
        means = arm_means(surface, weights, q)
        artifacts.regret = regret_curve(base.trace, means)
        artifacts.bound = bound_curve(settings.iterations, means)
        values = surface.times if metric == "time" else surface.powers
        default = space.default.index
        f = values(np.array([default, base.x_opt.index]), q)
        artifacts.gain = gain_report(float(f[0]), float(f[1]), metric, default, base.x_opt.index)
        if len(reports) > 1:
            artifacts.summary = sampling_summary(reports, surface, q, metric)
            curves = {int(r.settings["seed"]): regret_curve(r.trace, means) for r in reports}
            artifacts.envelope = regret_envelope(curves)
            artifacts.envelope_bound = artifacts.bound
    else:
        f_default = _observed_mean(base, space.default.index, metric)
        f_best = _observed_mean(base, base.x_opt.index, metric)
        if f_default is not None and f_best is not None:
            artifacts.gain = gain_report(f_default, f_best, metric, space.default.index, base.x_opt.index, source="trace")

    written = emit_report(artifacts, settings.output_dir, settings.fmt)

    console.print(f"✅ x_opt = {base.x_opt_label} (index {base.x_opt.index}, "
                  f"{base.final_counts[base.x_opt.index]}/{settings.iterations} pulls)")
    if artifacts.gain is not None:
        console.print(f"   PG_best ({metric}, vs default): {artifacts.gain.pg_best:.2f}%")
    if artifacts.regret is not None:
        console.print(f"   Regret R_T = {format_float(artifacts.regret.final, 6)} "
                      f"(bound {format_float(artifacts.bound[-1], 6)})")
    if artifacts.summary is not None:
        s = artifacts.summary
        console.print(f"   {len(reports)} runs: mean distance from oracle {s.mean_distance:.2f}%, "
                      f"{s.within(12.0)} within 12%, {s.improved()} beat the default")
        console.print(f"   Expected total reward: {format_float(expected_total_reward(reports), 6)}")
    console.print(f"📁 {len(written)} files in {settings.output_dir}")
    return 0


def _oracle_lines(space: ConfigSpace, rows: list[tuple[str, int, float]]) -> str:
    return "".join(
        f"{metric} index={i} config={space.describe(space.config_at(i))} value={format_float(v)}\n"
        for metric, i, v in rows
    )


def cmd_oracle(settings: RunSettings, exhaustive_yes: bool = False) -> int:
    """Exhaustively evaluate the space; write oracle.csv and the time/power/weighted oracles."""
    space = settings.load_space()
    weights = settings.weights
    out = Path(settings.output_dir)

    if settings.preset == "lulesh" and space.size != LULESH_STATED_SIZE:
        err_console.print(f"⚠️  lulesh: the listed ranges give {space.size} configurations; "
                          f"the published table states {LULESH_STATED_SIZE}")

    if settings.mode == "surface":
        surface = settings.surface(space)
        q = surface.fidelity.check(settings.q if settings.q is not None else surface.fidelity.q_max)
        guard(surface.size)
        dump_surface(surface, q, out / "oracle.csv", settings.fmt)
        rows = []
        for metric in ("time", "power", weights):
            best = oracle(surface, q, metric)
            rows.append((best.metric, best.config.index, best.value))
    else:
        if not exhaustive_yes:
            raise OracleGuardError("exhaustive command-mode sweep needs --exhaustive-yes")
        if space.command is None:
            raise ConfigurationError("command mode needs a [command] section with a template")
        guard(space.size)
        cmd = space.command
        evaluator = CommandEvaluator(space, cmd.template, make_probe(settings.probe or cmd.probe, cmd.poll_ms),
                                     NoiseSpec(level=settings.noise, seed=settings.seed), settings.q)
        table = Table(DUMP_HEADER)
        times = np.empty(space.size)
        powers = np.empty(space.size)
        for config in space.configurations():
            sample = evaluator(config)
            times[config.index], powers[config.index] = sample.exec_time, sample.power
            table.rows.append((config.index, space.describe(config), sample.fidelity, sample.exec_time, sample.power))
        write_files(out, {"oracle": table}, {}, settings.fmt)
        t_hat = (times - times.min()) / ((times.max() - times.min()) or 1.0)
        p_hat = (powers - powers.min()) / ((powers.max() - powers.min()) or 1.0)
        weighted = weights.alpha * t_hat + weights.beta * p_hat
        rows = [
            ("time", int(np.argmin(times)), float(times.min())),
            ("power", int(np.argmin(powers)), float(powers.min())),
            (f"weighted(alpha={weights.alpha},beta={weights.beta})", int(np.argmin(weighted)), float(weighted.min())),
        ]

    text = _oracle_lines(space, rows)
    write_files(out, {}, {"oracle.txt": text})
    console.print(f"📊 {space.size} configurations evaluated")
    for line in text.splitlines():
        console.print(f"   {line}")
    return 0


def _analysis_space(args: argparse.Namespace, saved: dict[str, str]) -> tuple[ConfigSpace, Optional[str]]:
    preset = args.preset or (saved.get("preset") if not args.space else None)
    space_file = args.space or saved.get("space") or None
    if preset and preset != "custom":
        return preset_space(preset), preset
    if space_file:
        return load_space(space_file), "custom"
    raise AnalysisError("no space: pass --preset or --space (or keep report.txt beside the trace)")


def _saved_settings(trace_path: Path) -> dict[str, str]:
    report = trace_path.parent / "report.txt"
    return read_key_values(report) if report.exists() else {}


def _pick(flag, saved: dict[str, str], key: str, cast, default):
    if flag is not None:
        return flag
    raw = saved.get(key, "")
    return cast(raw) if raw != "" else default


def cmd_analyze(kind: str, args: argparse.Namespace) -> int:
    """Regret, gain, top-k overlap or fidelity transfer from files written by tune/oracle."""
    if kind in ("overlap", "transfer"):
        column = 1 if args.metric == "time" else 2
        a = read_surface_dump(args.dump_a)[column]
        b = read_surface_dump(args.dump_b)[column]
        if len(a) != len(b):
            raise AnalysisError(f"dumps cover different spaces ({len(a)} vs {len(b)} configurations)")
        if kind == "overlap":
            console.print(topk_overlap(ranking(a), ranking(b), args.k))
        else:
            # top-k of dump A scored against the oracle of dump B
            console.print(format_float(transfer_distance(a, b, args.k), 6))
        return 0

    trace_path = Path(args.trace)
    trace = read_trace(trace_path)
    saved = _saved_settings(trace_path)
    out = Path(args.output) if args.output else trace_path.parent
    weights = Weights(
        alpha=_pick(args.alpha, saved, "alpha", float, DEFAULT_ALPHA),
        beta=_pick(args.beta, saved, "beta", float, DEFAULT_BETA),
    )
    space, preset = _analysis_space(args, saved)
    surface_backed = saved.get("mode", "surface") == "surface" and preset is not None

    def surface() -> SyntheticSurface:
        return make_surface(
            preset, _pick(args.structure_seed, saved, "structure_seed", int, DEFAULT_STRUCTURE_SEED),
            _pick(args.fidelity_correlation, saved, "fidelity_correlation", float, DEFAULT_FIDELITY_CORRELATION),
            space=space,
        )

    if kind == "regret":
        if not surface_backed:
            raise AnalysisError("regret needs true arm means, which exist only for surface-backed runs")
        s = surface()
        q = _pick(args.q, saved, "q", float, s.fidelity.q_max)
        means = arm_means(s, weights, q)
        curve = regret_curve(trace, means)
        bound = bound_curve(len(trace), means)
        write_files(out, {"regret": regret_table(curve, bound)}, {}, args.format)
        console.print(f"📈 R_T = {format_float(curve.final, 6)} after {len(trace)} rounds "
                      f"(bound {format_float(bound[-1], 6)}); wrote {out / 'regret.csv'}")
        return 0

    # gain
    metric = _gain_metric(weights)
    default_index = args.default_index if args.default_index is not None else space.default.index
    space.config_at(default_index)
    counts: dict[int, int] = {}
    for rec in trace:
        counts[rec.arm_index] = counts.get(rec.arm_index, 0) + 1
    best_index = int(saved["x_opt_index"]) if "x_opt_index" in saved else min(counts, key=lambda i: (-counts[i], i))

    if surface_backed and not args.observed:
        s = surface()
        q = _pick(args.q, saved, "q", float, s.fidelity.q_max)
        values = s.times if metric == "time" else s.powers
        f = values(np.array([default_index, best_index]), q)
        gain = gain_report(float(f[0]), float(f[1]), metric, default_index, best_index)
    else:
        def observed(index: int) -> float:
            vals = [r.raw_time if metric == "time" else r.raw_power for r in trace if r.arm_index == index]
            if not vals:
                raise AnalysisError(f"configuration {index} never appears in the trace")
            return sum(vals) / len(vals)
        gain = gain_report(observed(default_index), observed(best_index), metric, default_index, best_index, source="trace")

    write_files(out, {}, {"gain.txt": gain.to_text()})
    console.print(f"📊 PG_best ({metric}) = {gain.pg_best:.4f}% "
                  f"(default {format_float(gain.f_default, 6)}, best {format_float(gain.f_best, 6)})")
    return 0


def _heatmap(value: str) -> tuple[str, str]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected two parameter names, e.g. gset,dset")
    return parts[0], parts[1]


def _add_space_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help=f"Built-in space and surface ({', '.join(PRESETS)})")
    p.add_argument("--space", type=Path, help="Space definition file")
    p.add_argument("--mode", choices=["surface", "command"], default="surface")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Weight on execution time")
    p.add_argument("--beta", type=float, default=DEFAULT_BETA, help="Weight on power")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--noise", type=float, default=0.0, help="Uniform multiplicative noise level (0-0.5)")
    p.add_argument("-q", "--fidelity", type=float, dest="q", help="Fidelity in [q_min, q_max] (default q_max)")
    p.add_argument("-o", "--output", type=Path, default=OUTPUT_DIR)
    p.add_argument("--structure-seed", type=int, default=DEFAULT_STRUCTURE_SEED)
    p.add_argument("--fidelity-correlation", type=float, default=DEFAULT_FIDELITY_CORRELATION)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--probe", help="Power probe: constant:<W> or file:<path>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orchestrator", description="Bandit autotuner for discrete configuration spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    tune = sub.add_parser("tune", help="Run the UCB tuning loop")
    _add_space_args(tune)
    tune.add_argument("-T", "--iterations", type=int, default=DEFAULT_ITERATIONS)
    tune.add_argument("--replications", type=int, help="Independent runs (default 100 on surfaces, 1 for commands)")
    tune.add_argument("--jobs", type=int, default=1, help="Processes for surface-mode replications")
    tune.add_argument("--no-log", action="store_true", help="Do not write the JSONL run log")
    tune.add_argument("--heatmap", type=_heatmap, help="Two parameters for heatmap.csv (default: first two)")

    orc = sub.add_parser("oracle", help="Exhaustive sweep and oracle configurations")
    _add_space_args(orc)
    orc.add_argument("--exhaustive-yes", action="store_true", help="Confirm a command-mode sweep of every configuration")

    ana = sub.add_parser("analyze", help="Regret, gain, fidelity overlap or transfer from saved files")
    ana.add_argument("kind", choices=["regret", "gain", "overlap", "transfer"])
    ana.add_argument("--trace", type=Path)
    ana.add_argument("--preset")
    ana.add_argument("--space", type=Path)
    ana.add_argument("--alpha", type=float)
    ana.add_argument("--beta", type=float)
    ana.add_argument("--seed", type=int, help="Accepted for symmetry with tune; the trace fixes the run")
    ana.add_argument("-q", "--fidelity", type=float, dest="q")
    ana.add_argument("--structure-seed", type=int)
    ana.add_argument("--fidelity-correlation", type=float)
    ana.add_argument("--default-index", type=int)
    ana.add_argument("--observed", action="store_true", help="Gain from observed trace means even on surfaces")
    ana.add_argument("--dump-a", type=Path)
    ana.add_argument("--dump-b", type=Path)
    ana.add_argument("-k", type=int, default=20)
    ana.add_argument("--metric", choices=["time", "power"], default="time")
    ana.add_argument("-o", "--output", type=Path)
    ana.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _settings(args: argparse.Namespace) -> RunSettings:
    return RunSettings(
        preset=args.preset,
        space_file=args.space,
        mode=args.mode,
        iterations=getattr(args, "iterations", DEFAULT_ITERATIONS),
        alpha=args.alpha,
        beta=args.beta,
        seed=args.seed,
        noise=args.noise,
        q=args.q,
        output_dir=args.output,
        replications=getattr(args, "replications", None),
        structure_seed=args.structure_seed,
        fidelity_correlation=args.fidelity_correlation,
        jobs=getattr(args, "jobs", 1),
        fmt=args.format,
        log=not getattr(args, "no_log", False),
        probe=args.probe,
        heatmap=getattr(args, "heatmap", None),
    )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        if args.command == "tune":
            return cmd_tune(_settings(args))
        if args.command == "oracle":
            return cmd_oracle(_settings(args), args.exhaustive_yes)
        if args.kind in ("overlap", "transfer"):
            if not (args.dump_a and args.dump_b):
                raise AnalysisError(f"{args.kind} needs --dump-a and --dump-b")
        elif not args.trace:
            raise AnalysisError(f"{args.kind} needs --trace")
        return cmd_analyze(args.kind, args)
    except ValidationError as e:
        err_console.print(f"❌ Invalid settings: {e}")
        return 2
    except PartialRunError as e:
        err_console.print(f"💥 {e} ({len(e.trace)} rounds completed)")
        if e.cause is not None and getattr(e.cause, "output", ""):
            err_console.print(e.cause.output[-2000:])
        return e.exit_status
    except TunerError as e:
        err_console.print(f"❌ {e}")
        return e.exit_status


if __name__ == "__main__":
    sys.exit(main())
