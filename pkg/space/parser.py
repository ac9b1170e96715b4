"""Space-file parser.

Format (UTF-8):

    # comment
    [space]
    layout = {layout} | DGZ, DZG, GDZ
    r      = r | 1-15              # inclusive integer range
    [default]
    layout = DGZ
    r = 11
    [command]
    template = ./kripke --layout {layout} -r {r}
    probe = constant:5.0
    poll_ms = 100

In [space] and [default], whitespace followed by `#` starts a trailing comment.
[command] lines are taken verbatim so templates may contain `#`.
"""

from __future__ import annotations
import re
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from config import PRESETS_DIR
from errors import ConfigurationError, SpaceParseError
from .models import CommandSpec, ConfigSpace, Configuration, ParameterDef

SECTIONS = ("space", "default", "command")
COMMAND_KEYS = ("template", "probe", "poll_ms")
PRESETS = ("kripke", "lulesh", "clomp", "hypre")

_SECTION = re.compile(r"^\[\s*(?P<name>[A-Za-z_]+)\s*\]$")
_RANGE = re.compile(r"^(?P<lo>-?\d+)\s*-\s*(?P<hi>-?\d+)$")
_TRAILING_COMMENT = re.compile(r"\s+#.*$")


def _normalize_token(token: str) -> str:
    token = token.strip()
    if token.startswith("{") and token.endswith("}"):
        return token
    return "{" + token + "}"


def _expand_values(raw: str) -> list[str]:
    raw = raw.strip()
    m = _RANGE.match(raw)
    if m:
        lo, hi = int(m.group("lo")), int(m.group("hi"))
        if lo > hi:
            raise ValueError(f"empty range {lo}-{hi}")
        return [str(v) for v in range(lo, hi + 1)]
    values = [v.strip() for v in raw.split(",")]
    if any(not v for v in values):
        raise ValueError("empty value in list")
    return values


def _split_assignment(line: str, line_no: int) -> tuple[str, str]:
    if "=" not in line:
        raise SpaceParseError("expected 'name = ...'", line_no, line)
    key, value = line.split("=", 1)
    key = key.strip()
    if not key:
        raise SpaceParseError("missing name before '='", line_no, line)
    return key, value.strip()


def parse_space(text: str, name: str = "custom") -> ConfigSpace:
    """Parse space-file text into a ConfigSpace (parameters in file order)."""
    section: Optional[str] = None
    params: list[ParameterDef] = []
    param_lines: dict[str, int] = {}
    defaults: dict[str, tuple[str, int, str]] = {}  # name -> (value, line_no, line)
    command: dict[str, str] = {}
    saw_default = False

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        m = _SECTION.match(_TRAILING_COMMENT.sub("", line))
        if m:
            section = m.group("name").lower()
            if section not in SECTIONS:
                raise SpaceParseError(f"unknown section [{section}]", line_no, raw_line)
            saw_default = saw_default or section == "default"
            continue

        if section is None:
            raise SpaceParseError("content outside any section", line_no, raw_line)

        if section != "command":
            line = _TRAILING_COMMENT.sub("", line)

        key, value = _split_assignment(line, line_no)

        if section == "space":
            if "|" not in value:
                raise SpaceParseError("expected 'name = token | values'", line_no, raw_line, key)
            token, raw_values = value.split("|", 1)
            if "#" in raw_values:
                raise SpaceParseError("'#' inside a value list (comments need whitespace before '#')", line_no, raw_line, key)
            if key in param_lines:
                raise SpaceParseError(
                    f"duplicate parameter (first defined on line {param_lines[key]})", line_no, raw_line, key)
            if not token.strip():
                raise SpaceParseError("missing substitution token", line_no, raw_line, key)
            try:
                values = _expand_values(raw_values)
                params.append(ParameterDef(
                    name=key, values=tuple(values), substitution_token=_normalize_token(token)))
            except (ValueError, ValidationError) as e:
                msg = e.errors()[0]["msg"] if isinstance(e, ValidationError) else str(e)
                raise SpaceParseError(msg, line_no, raw_line, key) from None
            param_lines[key] = line_no

        elif section == "default":
            if key in defaults:
                raise SpaceParseError("duplicate default", line_no, raw_line, key)
            defaults[key] = (value, line_no, raw_line)

        else:
            if key not in COMMAND_KEYS:
                raise SpaceParseError(f"unknown command key (expected one of {COMMAND_KEYS})", line_no, raw_line)
            command[key] = value

    if not params:
        raise SpaceParseError("no parameters in [space] section")

    by_name = {p.name: p for p in params}
    assignment = []
    for key, (value, line_no, raw_line) in defaults.items():
        if key not in by_name:
            raise SpaceParseError("default for unknown parameter", line_no, raw_line, key)
    for p in params:
        if p.name in defaults:
            value, line_no, raw_line = defaults[p.name]
            try:
                assignment.append(p.value_index(value))
            except ConfigurationError:
                raise SpaceParseError(f"default value {value!r} not in range", line_no, raw_line, p.name) from None
        elif saw_default:
            raise SpaceParseError("missing default value", line_no=param_lines[p.name], parameter=p.name)
        else:
            # No [default] section at all: first value of every parameter
            assignment.append(0)

    index = 0
    for p, a in zip(params, assignment):
        index = index * len(p.values) + a

    spec = None
    if command:
        if "template" not in command:
            raise SpaceParseError("[command] section needs a template")
        poll = command.get("poll_ms")
        try:
            spec = CommandSpec(
                template=command["template"],
                probe=command.get("probe"),
                poll_ms=int(poll) if poll else None,
            )
        except (ValueError, ValidationError):
            raise SpaceParseError(f"poll_ms must be an integer, got {poll!r}") from None

    return ConfigSpace(
        parameters=tuple(params),
        default=Configuration(index=index, assignment=tuple(assignment)),
        command=spec,
        name=name,
    )


def load_space(path: str | Path, name: str | None = None) -> ConfigSpace:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read space file {path}: {e}") from e
    return parse_space(text, name=name or path.stem)


def preset_space(preset: str) -> ConfigSpace:
    """Load one of the shipped preset spaces (kripke, lulesh, clomp, hypre)."""
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {preset!r} (expected one of {PRESETS})")
    return load_space(PRESETS_DIR / f"{preset}.space", name=preset)
