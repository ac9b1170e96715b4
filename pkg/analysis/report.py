"""Report files: CSV/plain-text outputs with an optional JSON mirror.

Every emission is staged in a temporary directory inside the output directory
and moved into place only after all files rendered.
"""

from __future__ import annotations
import csv
import io
import json
import math
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional, Sequence

import numpy as np

from bandit.models import TraceRecord, TuneReport
from config import output_precision
from errors import AnalysisError
from space import ConfigSpace
from surfaces import SyntheticSurface, guard
from .models import GainReport, RegretCurve
from .study import RegretEnvelope, SamplingSummary

Format = Literal["csv", "json"]

TRACE_HEADER = ("t", "arm_index", "config", "raw_time_s", "raw_power_w", "reward", "ucb_chosen")
REGRET_HEADER = ("t", "cumulative_regret", "bound")
HEATMAP_HEADER = ("p1_value", "p2_value", "selection_count")
DUMP_HEADER = ("config_index", "assignment", "q", "time_s", "power_w")
REPLICATIONS_HEADER = ("seed", "x_opt_index", "x_opt", "value", "distance_pct", "pg_best_pct", "total_reward")
DUMP_CHUNK = 1 << 16


def format_float(value: float, precision: Optional[int] = None) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{precision or output_precision()}g}"


def _cell(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return format_float(value) if not math.isfinite(value) else float(format_float(value))
    return value


@dataclass
class Table:
    header: Sequence[str]
    rows: list[Sequence] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        records = [{k: _json_value(v) for k, v in zip(self.header, row)} for row in self.rows]
        return json.dumps(records, indent=2, allow_nan=False) + "\n"


@dataclass
class ReportArtifacts:
    """Everything one tune invocation reports."""
    report: TuneReport
    space: ConfigSpace
    regret: Optional[RegretCurve] = None
    bound: Optional[list[float]] = None
    gain: Optional[GainReport] = None
    heatmap_params: Optional[tuple[str, str]] = None
    summary: Optional[SamplingSummary] = None
    envelope: Optional[RegretEnvelope] = None
    envelope_bound: Optional[list[float]] = None


# --- Tables ---

def trace_table(trace: Sequence[TraceRecord]) -> Table:
    return Table(TRACE_HEADER, [
        (r.t, r.arm_index, r.config, r.raw_time, r.raw_power, r.reward, r.ucb) for r in trace
    ])


def regret_table(curve: RegretCurve, bound: Optional[Sequence[float]] = None) -> Table:
    if bound is not None and len(bound) != len(curve.values):
        raise AnalysisError("bound and regret curve differ in length")
    return Table(REGRET_HEADER, [
        (t, v, bound[t - 1] if bound is not None else "") for t, v in enumerate(curve.values, start=1)
    ])


def heatmap_table(report: TuneReport, space: ConfigSpace, params: Optional[tuple[str, str]] = None) -> Table:
    """Selection counts marginalized onto two parameters, every value pair listed."""
    if params is None:
        names = space.names
        params = (names[0], names[1] if len(names) > 1 else names[0])
    p1, p2 = (space.parameter(n) for n in params)
    i1, i2 = space.names.index(p1.name), space.names.index(p2.name)
    grid = np.zeros((len(p1.values), len(p2.values)), dtype=np.int64)
    if report.final_counts:
        idx = np.array(sorted(report.final_counts))
        digits = space.decode(idx)
        counts = np.array([report.final_counts[i] for i in idx])
        np.add.at(grid, (digits[:, i1], digits[:, i2]), counts)
    rows = [(v1, v2, int(grid[a, b])) for a, v1 in enumerate(p1.values) for b, v2 in enumerate(p2.values)]
    return Table(HEATMAP_HEADER, rows)


def replications_table(summary: SamplingSummary) -> Table:
    return Table(REPLICATIONS_HEADER, [
        (o.seed, o.x_opt_index, o.x_opt, o.value, o.distance_pct, o.pg_best_pct, o.total_reward)
        for o in summary.outcomes
    ])


def envelope_tables(envelope: RegretEnvelope, bound: Optional[Sequence[float]] = None) -> tuple[Table, Table]:
    per_seed = Table(("seed", "t", "cumulative_regret"), [
        (seed, t, v) for seed, c in envelope.curves.items() for t, v in enumerate(c.values, start=1)
    ])
    best = envelope.best_run.values
    mean = envelope.mean
    rows = []
    for t, v in enumerate(envelope.envelope, start=1):
        rows.append((t, v, best[t - 1], mean[t - 1], bound[t - 1] if bound is not None else ""))
    summary = Table(("t", "min_envelope", f"best_run_seed_{envelope.best_seed}", "mean", "bound"), rows)
    return per_seed, summary


# --- Emission ---

def _check_dir(output_dir: str | Path | None) -> Path:
    if output_dir is None or not str(output_dir).strip():
        raise AnalysisError("empty output directory path")
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise AnalysisError(f"cannot create output directory {out}: {e}") from e
    return out


def write_files(output_dir: str | Path | None, tables: dict[str, Table], texts: dict[str, str], fmt: Format = "csv") -> list[Path]:
    """Render every table/text into a staging directory, then move them into place."""
    out = _check_dir(output_dir)
    rendered: dict[str, str] = dict(texts)
    for stem, table in tables.items():
        rendered[f"{stem}.csv"] = table.to_csv()
        if fmt == "json":
            rendered[f"{stem}.json"] = table.to_json()

    try:
        staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    except OSError as e:
        raise AnalysisError(f"cannot stage files in {out}: {e}") from e
    written = []
    try:
        for name, content in rendered.items():
            with open(staging / name, "w", encoding="utf-8", newline="") as f:
                f.write(content)
        for name in sorted(rendered):
            os.replace(staging / name, out / name)
            written.append(out / name)
    except OSError as e:
        raise AnalysisError(f"cannot write report to {out}: {e}") from e
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return written


def emit_report(artifacts: ReportArtifacts, output_dir: str | Path | None, fmt: Format = "csv") -> list[Path]:
    """Write trace, regret, gain, heatmap and summary files for one tune invocation."""
    a = artifacts
    tables = {
        "trace": trace_table(a.report.trace),
        "heatmap": heatmap_table(a.report, a.space, a.heatmap_params),
    }
    texts = {"report.txt": a.report.to_text()}
    if a.regret is not None:
        tables["regret"] = regret_table(a.regret, a.bound)
    texts["gain.txt"] = a.gain.to_text() if a.gain is not None else "pg_best_pct=unavailable\n"
    if a.summary is not None:
        tables["replications"] = replications_table(a.summary)
        texts["replications.txt"] = a.summary.to_text()
    if a.envelope is not None:
        tables["regret_replications"], tables["regret_envelope"] = envelope_tables(a.envelope, a.envelope_bound)
    return write_files(output_dir, tables, texts, fmt)


# --- Readers ---

def _read_rows(path: str | Path, required: Sequence[str]) -> list[dict[str, str]]:
    p = Path(path)
    try:
        with open(p, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = [c for c in required if c not in (reader.fieldnames or [])]
            if missing:
                raise AnalysisError(f"{p}: missing columns {missing}")
            return list(reader)
    except OSError as e:
        raise AnalysisError(f"cannot read {p}: {e}") from e


def read_trace(path: str | Path) -> list[TraceRecord]:
    rows = _read_rows(path, TRACE_HEADER)
    if not rows:
        raise AnalysisError(f"{path}: empty trace")
    try:
        return [
            TraceRecord(
                t=int(r["t"]), arm_index=int(r["arm_index"]), config=r["config"],
                raw_time=float(r["raw_time_s"]), raw_power=float(r["raw_power_w"]),
                reward=float(r["reward"]), ucb=float(r["ucb_chosen"]),
            )
            for r in rows
        ]
    except ValueError as e:
        raise AnalysisError(f"{path}: malformed trace row: {e}") from None


def read_key_values(path: str | Path) -> dict[str, str]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise AnalysisError(f"cannot read {p}: {e}") from e
    out = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep:
            out[key.strip()] = value.strip()
    return out


def dump_surface(surface: SyntheticSurface, q: float, path: str | Path, fmt: Format = "csv") -> Path:
    """Full enumeration `config_index,assignment,q,time_s,power_w`, streamed in index order."""
    guard(surface.size)
    p = Path(path)
    _check_dir(p.parent)
    tmp = p.with_name(f".{p.name}.tmp")
    space = surface.space
    labels = [[f"{prm.name}={v}" for v in prm.values] for prm in space.parameters]
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(DUMP_HEADER)
            for start in range(0, surface.size, DUMP_CHUNK):
                idx = np.arange(start, min(start + DUMP_CHUNK, surface.size))
                times, powers = surface.evaluate(idx, q)
                digits = space.decode(idx).tolist()
                for i, d, t, pw in zip(idx.tolist(), digits, times.tolist(), powers.tolist()):
                    label = ";".join(labels[k][a] for k, a in enumerate(d))
                    w.writerow([i, label, format_float(q), format_float(t), format_float(pw)])
        os.replace(tmp, p)
    except OSError as e:
        raise AnalysisError(f"cannot write surface dump {p}: {e}") from e
    finally:
        if tmp.exists():
            tmp.unlink()
    if fmt == "json":
        rows = _read_rows(p, DUMP_HEADER)
        table = Table(DUMP_HEADER, [
            (int(r["config_index"]), r["assignment"], float(r["q"]), float(r["time_s"]), float(r["power_w"])) for r in rows
        ])
        write_files(p.parent, {}, {f"{p.stem}.json": table.to_json()})
    return p


def read_surface_dump(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(config indices, times, powers) sorted by config index."""
    rows = _read_rows(path, DUMP_HEADER)
    if not rows:
        raise AnalysisError(f"{path}: empty dump")
    try:
        idx = np.array([int(r["config_index"]) for r in rows])
        times = np.array([float(r["time_s"]) for r in rows])
        powers = np.array([float(r["power_w"]) for r in rows])
    except ValueError as e:
        raise AnalysisError(f"{path}: malformed dump row: {e}") from None
    order = np.argsort(idx, kind="stable")
    idx = idx[order]
    if not np.array_equal(idx, np.arange(len(idx))):
        raise AnalysisError(f"{path}: dump does not cover configurations 0..{len(idx) - 1} exactly once")
    return idx, times[order], powers[order]
