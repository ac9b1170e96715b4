"""Central configuration for the autotuner."""

from __future__ import annotations
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# === Paths ===
ROOT = Path(__file__).parent
PRESETS_DIR = ROOT / "surfaces" / "presets"
LOGS_DIR = Path(os.getenv("TUNER_LOG_DIR", str(ROOT / "logs")))
OUTPUT_DIR = Path(os.getenv("TUNER_OUTPUT_DIR", "out"))

# === Tuning defaults ===
# Time-focused setting: alpha=0.8 on execution time, beta=0.2 on power
DEFAULT_ALPHA = float(os.getenv("TUNER_ALPHA", "0.8"))
DEFAULT_BETA = float(os.getenv("TUNER_BETA", "0.2"))
DEFAULT_ITERATIONS = int(os.getenv("TUNER_ITERATIONS", "500"))
# Surface mode only; command mode defaults to a single replication
DEFAULT_REPLICATIONS = int(os.getenv("TUNER_REPLICATIONS", "100"))
DEFAULT_SEED = int(os.getenv("TUNER_SEED", "42"))

# Floor applied to normalized means before inversion in the reward
REWARD_EPSILON = 1e-6

# === Synthetic surfaces ===
DEFAULT_STRUCTURE_SEED = int(os.getenv("TUNER_STRUCTURE_SEED", "1"))
DEFAULT_FIDELITY_CORRELATION = float(os.getenv("TUNER_FIDELITY_CORRELATION", "0.8"))
ORACLE_GUARD = int(os.getenv("TUNER_ORACLE_GUARD", "10000000"))

# === Measurement ===
PROBE_INTERVAL_MS = int(os.getenv("TUNER_PROBE_INTERVAL_MS", "100"))
DEFAULT_POWER_W = float(os.getenv("TUNER_DEFAULT_POWER_W", "5.0"))
_timeout = os.getenv("TUNER_COMMAND_TIMEOUT_S", "")
COMMAND_TIMEOUT_S: float | None = float(_timeout) if _timeout else None

# === Output ===
DEFAULT_OUTPUT_PRECISION = 9


def output_precision() -> int:
    """Significant digits for floats in report files.

    LASP_OUTPUT_PRECISION wins over its alias TUNER_OUTPUT_PRECISION.
    """
    raw = os.getenv("LASP_OUTPUT_PRECISION") or os.getenv("TUNER_OUTPUT_PRECISION", "")
    if not raw:
        return DEFAULT_OUTPUT_PRECISION
    try:
        return max(1, int(raw))
    except ValueError:
        return DEFAULT_OUTPUT_PRECISION
