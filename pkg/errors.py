"""Exception hierarchy. Every error carries the CLI exit status it maps to."""

from __future__ import annotations


class TunerError(Exception):
    """Base for all autotuner errors."""
    exit_status = 2


class SpaceParseError(TunerError, ValueError):
    """Malformed space file."""

    def __init__(self, message: str, line_no: int | None = None, line: str = "", parameter: str | None = None):
        self.line_no = line_no
        self.line = line
        self.parameter = parameter
        self.message = message
        where = f"line {line_no}" if line_no is not None else "space file"
        if parameter:
            where += f", parameter '{parameter}'"
        detail = f": {line.strip()!r}" if line.strip() else ""
        super().__init__(f"{where}: {message}{detail}")

    def __reduce__(self):
        return type(self), (self.message, self.line_no, self.line, self.parameter)


class ConfigurationError(TunerError, ValueError):
    """Out-of-range index, value, fidelity or invalid settings."""


class ContractError(TunerError, ValueError):
    """Command template does not satisfy its contract; raised before spawn."""


class MeasurementError(TunerError, ValueError):
    """A measured time or power is non-finite or non-positive."""
    exit_status = 3


class ProbeError(MeasurementError):
    """Power probe fault."""


class ExecutionFault(TunerError, RuntimeError):
    """The workload command failed: nonzero exit, spawn failure or timeout."""
    exit_status = 3

    def __init__(self, message: str, returncode: int | None = None, output: str = ""):
        self.returncode = returncode
        self.output = output
        super().__init__(message)

    def __reduce__(self):
        return type(self), (str(self), self.returncode, self.output)


class PartialRunError(TunerError, RuntimeError):
    """Evaluator failed mid-run. Carries every completed round."""
    exit_status = 3

    def __init__(self, message: str, trace: list, cause: BaseException | None = None):
        self.trace = trace
        self.cause = cause
        super().__init__(message)

    def __reduce__(self):
        return type(self), (str(self), self.trace, self.cause)


class OracleGuardError(TunerError):
    """Exhaustive scan refused (space too large or not confirmed)."""


class AnalysisError(TunerError, ValueError):
    """Missing or mismatched analysis inputs."""
