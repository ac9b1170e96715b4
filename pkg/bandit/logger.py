"""Run logger: records every selection, measurement and fault of a tuning run.

Logs to logs/tune/YYYY-MM-DD/run_LABEL.jsonl
Each line is a JSON object with timestamp, action type, and data.
"""

from __future__ import annotations
import json
import math
import time
from datetime import datetime, timezone
from config import LOGS_DIR


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class RunLogger:
    """Logs all rounds of a single tuning run."""

    def __init__(self, label: str):
        self.label = label
        self.start_time = time.time()
        self.entries: list[dict] = []

        date_str = datetime.now(timezone.utc).strftime("%Y-%m-%d")
        self.log_dir = LOGS_DIR / "tune" / date_str
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.log_file = self.log_dir / f"run_{label}.jsonl"

    def log(self, action: str, data: dict | str | None = None):
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "elapsed_s": round(time.time() - self.start_time, 2),
            "action": action,
            "data": _jsonable(data),
        }
        self.entries.append(entry)
        with open(self.log_file, "a") as f:
            f.write(json.dumps(entry) + "\n")

    def log_start(self, settings: dict):
        self.log("start", settings)

    def log_select(self, t: int, arm_index: int, ucb: float):
        self.log("select", {"t": t, "arm": arm_index, "ucb": ucb})

    def log_sample(self, t: int, arm_index: int, exec_time: float, power: float):
        self.log("evaluate", {"t": t, "arm": arm_index, "time_s": exec_time, "power_w": power})

    def log_update(self, t: int, arm_index: int, reward: float, pulls: int):
        self.log("update", {"t": t, "arm": arm_index, "reward": reward, "pulls": pulls})

    def log_error(self, error: str):
        self.log("error", error)

    def log_complete(self, x_opt: int, pulls: int):
        self.log("complete", {"x_opt": x_opt, "pulls": pulls})

    def get_summary(self) -> dict:
        """Summary stats for this run."""
        rounds = [e for e in self.entries if e["action"] == "select"]
        errors = [e for e in self.entries if e["action"] == "error"]
        return {
            "label": self.label,
            "total_entries": len(self.entries),
            "rounds": len(rounds),
            "distinct_arms": len({e["data"]["arm"] for e in rounds}),
            "errors": len(errors),
            "elapsed_s": round(time.time() - self.start_time, 2),
            "log_file": str(self.log_file),
        }
