"""Flat key-value configuration format for the command-line surface.

Lines are ``key = value``; ``#`` starts a comment line and blank lines
are ignored.  Keys are dotted lowercase paths with units encoded in the
key name (kHz for frequencies and rates, nm for lengths, ms for times).
Unknown and duplicate keys are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DuplicateKey, ParseError, UnknownKey

_NAME_RE = re.compile(r"^[a-z0-9][a-z0-9\-_]*$")

# key -> value type
SCHEMA = {
    "preset": "name",
    "rabi.omega_c_khz": "float",
    "rabi.omega_p_khz": "float",
    "rabi.omega_a_khz": "float",
    "detuning.delta_c_khz": "float",
    "detuning.delta_p_khz": "float",
    "detuning.delta_a_khz": "float",
    "decay.gamma0_khz": "float",
    "decay.gamma_opt_khz": "float",
    "decay.gamma_ground_khz": "float",
    "decay.ground_mix_khz": "float",
    "decay.beta1": "float",
    "decay.beta2": "float",
    "decay.beta3": "float",
    "sweep.dp_min_khz": "float",
    "sweep.dp_max_khz": "float",
    "sweep.dp_points": "int",
    "map.d_min_khz": "float",
    "map.d_max_khz": "float",
    "map.d_points": "int",
    "evolve.t_end_ms": "float",
    "evolve.dt_ms": "float",
    "evolve.stride": "int",
    "spectrum.normalize": "bool",
}


def _parse_value(kind: str, raw: str, line: int):
    if kind == "float":
        try:
            return float(raw)
        except ValueError:
            raise ParseError(line, f"expected a number, got {raw!r}") from None
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ParseError(line, f"expected an integer, got {raw!r}") from None
    if kind == "bool":
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise ParseError(line, f"expected true or false, got {raw!r}")
    if kind == "name":
        if not _NAME_RE.match(raw):
            raise ParseError(line, f"expected an identifier, got {raw!r}")
        return raw
    raise AssertionError(kind)


@dataclass
class Config:
    """Typed key-value map with the source line of each key."""

    values: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __contains__(self, key):
        return key in self.values

    def update_from(self, other: "Config") -> None:
        """Overlay another config; later keys win."""
        self.values.update(other.values)
        self.lines.update(other.lines)


def parse_config(text: str, *, first_line: int = 1) -> Config:
    """Parse config text; raises ParseError, UnknownKey or DuplicateKey."""
    config = Config()
    for offset, raw_line in enumerate(text.splitlines()):
        line_no = first_line + offset
        stripped = raw_line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(line_no, f"expected 'key = value', got {stripped!r}")
        key, _, raw_value = stripped.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if not key:
            raise ParseError(line_no, "missing key before '='")
        if not raw_value:
            raise ParseError(line_no, f"missing value for key {key!r}")
        if key not in SCHEMA:
            raise UnknownKey(line_no, f"unknown key {key!r}")
        if key in config.values:
            raise DuplicateKey(line_no, f"duplicate key {key!r} "
                                        f"(first set on line {config.lines[key]})")
        config.values[key] = _parse_value(SCHEMA[key], raw_value, line_no)
        config.lines[key] = line_no
    return config


def parse_overrides(pairs) -> Config:
    """Parse repeatable ``key=value`` command-line overrides."""
    config = Config()
    for n, pair in enumerate(pairs, start=1):
        fragment = parse_config(pair, first_line=n)
        for key in fragment.values:
            if key in config.values:
                raise DuplicateKey(n, f"duplicate key {key!r} in overrides")
        config.update_from(fragment)
    return config
