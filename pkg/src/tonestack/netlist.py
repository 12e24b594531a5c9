"""Text configuration format for the tone-stack model.

One `key = value` per line, `#` comments, engineering suffixes on
component values (p n u m k M -- case-sensitive, so `m` is milli and
`M` is mega, the classic footgun).  Unknown keys are hard errors so a
typo in a component name cannot silently fall back to a default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .circuit import (
    ControlSettings,
    OutputMode,
    SignConvention,
    ToneStackComponents,
)
from .response import SWEEPABLE_CONTROLS, FrequencyGrid, log_grid

_SUFFIX_EXP = {"p": -12, "n": -9, "u": -6, "m": -3, "k": 3, "M": 6}
_SUFFIX_HINTS = {"K": "k", "P": "p", "N": "n", "U": "u", "µ": "u"}

_COMPONENT_KEYS = ("r1", "rt", "rm", "rb", "c1", "c2", "c3")
_CONTROL_KEYS = ("t", "m", "b")
_KNOWN_KEYS = _COMPONENT_KEYS + _CONTROL_KEYS + (
    "vin",
    "grid",
    "convention",
    "mode",
    "sweep",
    "load_compat",
    "version",
)

_ASSIGN_RE = re.compile(r"^(\s*)([^\s=#]+)\s*=\s*(.*?)\s*$")
_NUMBER_RE = re.compile(
    r"^(?P<mantissa>[+-]?(?:\d+\.?\d*|\.\d+)(?P<exp>[eE][+-]?\d+)?)"
    r"\s*(?P<suffix>[^\s\d+-]?)\s*(?P<unit>Ω|ohms?|F)?$"
)


class ParseError(Exception):
    """Config syntax or validation error with a source position."""

    def __init__(self, line: int, column: int, message: str, token: str = ""):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.token = token


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Arguments of a logspace frequency grid."""

    exp_min: float
    exp_max: float
    n: int

    def build(self) -> FrequencyGrid:
        return log_grid(self.exp_min, self.exp_max, self.n)


@dataclass(frozen=True, slots=True)
class SweepSpec:
    control: str
    step: float


@dataclass(frozen=True, slots=True)
class ConfigDocument:
    components: ToneStackComponents
    controls: ControlSettings
    grid: GridSpec
    vin: float
    convention: SignConvention
    mode: OutputMode
    sweep: SweepSpec | None
    load_compat: bool


DEFAULT_DOCUMENT = ConfigDocument(
    components=ToneStackComponents.bassman_5f6a(),
    controls=ControlSettings(t=0.0, m=0.0, b=1.0),
    grid=GridSpec(0.0, 5.0, 50),
    vin=5.0,
    convention=SignConvention.PHYSICAL,
    mode=OutputMode.COMPLEX_SUM,
    sweep=None,
    load_compat=False,
)


def parse_number(text: str, line: int, column: int) -> float:
    """Parse a number with an optional engineering suffix and unit.

    Suffixed values are evaluated as decimal strings ("22n" -> "22e-9")
    so that serialization can round-trip exactly.
    """
    match = _NUMBER_RE.match(text)
    if match is None:
        raise ParseError(line, column, f"malformed number {text!r}", text)
    suffix = match.group("suffix")
    mantissa = match.group("mantissa")
    if not suffix:
        return float(mantissa)
    if suffix not in _SUFFIX_EXP:
        hint = _SUFFIX_HINTS.get(suffix)
        detail = f" (suffixes are case-sensitive; did you mean {hint!r}?)" if hint else ""
        raise ParseError(
            line, column, f"unknown suffix {suffix!r} in {text!r}{detail}", text
        )
    if match.group("exp"):
        raise ParseError(
            line,
            column,
            f"ambiguous value {text!r}: exponent and suffix cannot be combined",
            text,
        )
    return float(f"{mantissa}e{_SUFFIX_EXP[suffix]}")


def _parse_component(key: str, text: str, line: int, column: int) -> float:
    value = parse_number(text, line, column)
    if not value > 0.0:
        raise ParseError(line, column, f"{key} must be positive, got {text!r}", text)
    return value


def _parse_control(key: str, text: str, line: int, column: int) -> float:
    value = parse_number(text, line, column)
    if not 0.0 <= value <= 1.0:
        raise ParseError(
            line, column, f"control {key} must lie in [0, 1], got {text!r}", text
        )
    return value


_GRID_RE = re.compile(r"^logspace\(\s*([^,\s]+)\s*,\s*([^,\s]+)\s*,\s*([^,\s]+)\s*\)$")


def _parse_grid(text: str, line: int, column: int) -> GridSpec:
    match = _GRID_RE.match(text)
    if match is None:
        raise ParseError(
            line, column, f"grid must look like logspace(0, 5, 50), got {text!r}", text
        )
    exp_min = parse_number(match.group(1), line, column)
    exp_max = parse_number(match.group(2), line, column)
    n_text = match.group(3)
    try:
        n = int(n_text)
    except ValueError:
        raise ParseError(
            line, column, f"grid point count must be an integer, got {n_text!r}", n_text
        ) from None
    if exp_min >= exp_max:
        raise ParseError(
            line, column, "grid exponents must be increasing", text
        )
    if n < 2:
        raise ParseError(line, column, "grid needs at least 2 points", n_text)
    return GridSpec(exp_min, exp_max, n)


def _parse_choice(mapping, what, text, line, column):
    try:
        return mapping[text]
    except KeyError:
        options = ", ".join(sorted(mapping))
        raise ParseError(
            line, column, f"{what} must be one of {options}; got {text!r}", text
        ) from None


def _parse_sweep(text: str, line: int, column: int) -> SweepSpec:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ParseError(
            line, column, f"sweep must look like 'bass 0.1', got {text!r}", text
        )
    control, step_text = parts
    if control not in SWEEPABLE_CONTROLS:
        raise ParseError(
            line,
            column,
            f"sweep control must be one of {', '.join(SWEEPABLE_CONTROLS)}; got {control!r}",
            control,
        )
    step = parse_number(step_text, line, column)
    if not 0.0 < step <= 1.0:
        raise ParseError(
            line, column, f"sweep step must lie in (0, 1], got {step_text!r}", step_text
        )
    return SweepSpec(control, step)


def _split_assignments(source: str):
    out = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        match = _ASSIGN_RE.match(text)
        if match is None:
            column = len(text) - len(text.lstrip()) + 1
            raise ParseError(
                lineno, column, "expected 'key = value'", text.strip()
            )
        key = match.group(2)
        key_col = match.start(2) + 1
        value_col = match.start(3) + 1
        value = match.group(3)
        if not value:
            raise ParseError(lineno, value_col, f"missing value for key {key!r}", key)
        out.append((key, value, lineno, key_col, value_col))
    return out


def _apply_assignments(base: ConfigDocument, assignments) -> ConfigDocument:
    comp = dict(
        (k, getattr(base.components, k)) for k in _COMPONENT_KEYS
    )
    ctrl = {k: getattr(base.controls, k) for k in _CONTROL_KEYS}
    doc = {
        "grid": base.grid,
        "vin": base.vin,
        "convention": base.convention,
        "mode": base.mode,
        "sweep": base.sweep,
        "load_compat": base.load_compat,
    }
    seen: set[str] = set()

    for index, (key, value, line, key_col, value_col) in enumerate(assignments):
        if key not in _KNOWN_KEYS:
            raise ParseError(line, key_col, f"unknown key {key!r}", key)
        if key == "version":
            if index != 0:
                raise ParseError(
                    line, key_col, "version must be the first assignment", key
                )
            if value != "1":
                raise ParseError(
                    line, value_col, f"unsupported version {value!r}", value
                )
            continue
        if key in seen:
            raise ParseError(line, key_col, f"duplicate key {key!r}", key)
        seen.add(key)

        if key in _COMPONENT_KEYS:
            comp[key] = _parse_component(key, value, line, value_col)
        elif key in _CONTROL_KEYS:
            ctrl[key] = _parse_control(key, value, line, value_col)
        elif key == "vin":
            vin = parse_number(value, line, value_col)
            if vin == 0.0:
                raise ParseError(line, value_col, "vin must be nonzero", value)
            doc["vin"] = vin
        elif key == "grid":
            doc["grid"] = _parse_grid(value, line, value_col)
        elif key == "convention":
            doc["convention"] = _parse_choice(
                {c.value: c for c in SignConvention}, "convention", value, line, value_col
            )
        elif key == "mode":
            doc["mode"] = _parse_choice(
                {m.value: m for m in OutputMode}, "mode", value, line, value_col
            )
        elif key == "sweep":
            doc["sweep"] = _parse_sweep(value, line, value_col)
        elif key == "load_compat":
            doc["load_compat"] = _parse_choice(
                {"true": True, "false": False}, "load_compat", value, line, value_col
            )

    return ConfigDocument(
        components=ToneStackComponents(**comp),
        controls=ControlSettings(**ctrl),
        **doc,
    )


def parse(source: str) -> ConfigDocument:
    """Parse a config document; missing keys take the stock defaults."""
    return _apply_assignments(DEFAULT_DOCUMENT, _split_assignments(source))


def apply_overrides(doc: ConfigDocument, overrides: list[str]) -> ConfigDocument:
    """Apply `key=value` strings on top of an existing document.

    Override index (1-based) is reported as the line number on error.
    """
    assignments = []
    for i, text in enumerate(overrides, start=1):
        parsed = _split_assignments(text)
        if len(parsed) != 1:
            raise ParseError(i, 1, f"override must be a single 'key=value', got {text!r}", text)
        key, value, _, key_col, value_col = parsed[0]
        assignments.append((key, value, i, key_col, value_col))
    return _apply_assignments(doc, assignments)


def format_engineering(value: float) -> str:
    """Format a positive value with an engineering suffix, mantissa in [1, 1000).

    Guarantees parse_number(result) == value; falls back to a plain
    shortest-repr float when no suffixed form reconstructs exactly.
    """
    if value > 0.0:
        exponent = 0
        scaled = value
        while scaled >= 1000.0 and exponent < 6:
            scaled /= 1000.0
            exponent += 3
        while scaled < 1.0 and exponent > -12:
            scaled *= 1000.0
            exponent -= 3
        suffix = {v: k for k, v in _SUFFIX_EXP.items()}.get(exponent, None)
        if exponent == 0:
            suffix = ""
        if suffix is not None and 1.0 <= scaled < 1000.0:
            for precision in range(1, 18):
                mantissa = f"{scaled:.{precision}g}"
                if "e" in mantissa or "E" in mantissa:
                    continue
                if float(f"{mantissa}e{exponent}") == value:
                    return f"{mantissa}{suffix}"
    return repr(value)


def serialize(doc: ConfigDocument) -> str:
    """Canonical text form; parse(serialize(doc)) == doc."""
    lines = ["version = 1"]
    for key in _COMPONENT_KEYS:
        lines.append(f"{key} = {format_engineering(getattr(doc.components, key))}")
    for key in _CONTROL_KEYS:
        lines.append(f"{key} = {repr(getattr(doc.controls, key))}")
    lines.append(f"vin = {repr(doc.vin)}")
    lines.append(
        f"grid = logspace({repr(doc.grid.exp_min)}, {repr(doc.grid.exp_max)}, {doc.grid.n})"
    )
    lines.append(f"convention = {doc.convention.value}")
    lines.append(f"mode = {doc.mode.value}")
    if doc.sweep is not None:
        lines.append(f"sweep = {doc.sweep.control} {repr(doc.sweep.step)}")
    lines.append(f"load_compat = {'true' if doc.load_compat else 'false'}")
    return "\n".join(lines) + "\n"
