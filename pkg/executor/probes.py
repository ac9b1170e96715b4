"""Power probes: constant, filesystem sampler (hwmon/INA-style files), model-provided."""

from __future__ import annotations
import math
import re
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, Optional

from config import DEFAULT_POWER_W, PROBE_INTERVAL_MS
from errors import ConfigurationError, ProbeError

_READING = re.compile(r"^\s*(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(?P<unit>uW|µW|mW|W)?\s*$")
_UNIT_SCALE = {None: 1.0, "W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6}


class PowerProbe(ABC):
    """A source of instantaneous power readings in watts."""

    @abstractmethod
    def _raw_read(self) -> float:
        ...

    def read(self) -> float:
        value = self._raw_read()
        if not (math.isfinite(value) and value > 0):
            raise ProbeError(f"{self!r} returned invalid reading {value!r}")
        return value


class ConstantProbe(PowerProbe):
    def __init__(self, watts: float):
        self.watts = float(watts)

    def _raw_read(self) -> float:
        return self.watts

    def __repr__(self) -> str:
        return f"ConstantProbe({self.watts} W)"


class FileSampler(PowerProbe):
    """Reads a decimal number from a file on every poll; `uW`/`mW` suffixes are scaled to watts."""

    def __init__(self, path: str | Path, interval_ms: int = PROBE_INTERVAL_MS):
        self.path = Path(path)
        self.interval_ms = interval_ms

    def _raw_read(self) -> float:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as e:
            raise ProbeError(f"cannot read power file {self.path}: {e}") from e
        m = _READING.match(text)
        if not m:
            raise ProbeError(f"unparseable power reading in {self.path}: {text.strip()[:40]!r}")
        return float(m.group("num")) * _UNIT_SCALE[m.group("unit")]

    def __repr__(self) -> str:
        return f"FileSampler({self.path})"


class ModelProbe(PowerProbe):
    """Power supplied by a model function, e.g. a synthetic surface."""

    def __init__(self, fn: Callable[[], float]):
        self.fn = fn

    def _raw_read(self) -> float:
        return float(self.fn())

    def __repr__(self) -> str:
        return "ModelProbe()"


def make_probe(spec: Optional[str], poll_ms: Optional[int] = None) -> PowerProbe:
    """Build a probe from `constant:<W>` or `file:<path>`; None gives the configured constant."""
    if not spec:
        return ConstantProbe(DEFAULT_POWER_W)
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "constant":
        try:
            return ConstantProbe(float(arg))
        except ValueError:
            raise ConfigurationError(f"constant probe needs a number of watts, got {arg!r}") from None
    if kind == "file":
        if not arg.strip():
            raise ConfigurationError("file probe needs a path")
        return FileSampler(arg.strip(), poll_ms or PROBE_INTERVAL_MS)
    raise ConfigurationError(f"unknown probe kind {kind!r} (expected constant or file)")


class ProbeSampler:
    """Polls a probe on a background thread while a child process runs."""

    def __init__(self, probe: PowerProbe, interval_ms: int = PROBE_INTERVAL_MS):
        self.probe = probe
        self.interval_s = max(interval_ms, 1) / 1000.0
        self.readings: list[float] = []
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self._error: Optional[BaseException] = None

    def _poll(self) -> None:
        while True:
            try:
                self.readings.append(self.probe.read())
            except ProbeError as e:
                self._error = e
                return
            if self._stop.wait(self.interval_s):
                return

    def start(self) -> None:
        self._thread = threading.Thread(target=self._poll, name="power-probe", daemon=True)
        self._thread.start()

    def stop(self) -> float:
        """Stop polling and return the mean reading in watts."""
        self._stop.set()
        if self._thread is not None:
            self._thread.join()
        if self._error is not None:
            raise self._error
        if not self.readings:
            self.readings.append(self.probe.read())
        return sum(self.readings) / len(self.readings)
