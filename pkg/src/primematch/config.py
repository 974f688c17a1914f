"""Runtime configuration: JSON file, environment overrides, validation.

Precedence is flags > environment > file > defaults. Environment
variables use the PRIMEMATCH_ prefix (PRIMEMATCH_N, PRIMEMATCH_MODE,
and so on). Every validation failure raises ConfigError naming the
field so the diagnostic is actionable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

from .compare import bound_fits_group
from .errors import ConfigError

ENV_PREFIX = "PRIMEMATCH_"
MODES = ("semi-honest", "malicious")
PARAM_SETS = ("ristretto255-default",)


@dataclass
class Config:
    n: int = 31
    mode: str = "malicious"
    params: str = "ristretto255-default"
    listen: str = "127.0.0.1:0"
    connect: str = "127.0.0.1:7700"
    symbols: list[str] = field(default_factory=lambda: ["AAA"])
    seed: bytes | None = None
    timeout: float = 30.0
    clients: int = 2
    window: float = 60.0

    def validate(self) -> "Config":
        if self.n < 1 or (self.n + 1) & self.n != 0:
            raise ConfigError(
                f"n: must be one short of a power of two (1, 3, 7, 15, ...), got {self.n}"
            )
        if not bound_fits_group(self.n):
            raise ConfigError(f"n: comparison values for n={self.n} overflow the group")
        if self.mode not in MODES:
            raise ConfigError(f"mode: expected one of {MODES}, got {self.mode!r}")
        if self.params not in PARAM_SETS:
            raise ConfigError(f"params: unknown parameter set {self.params!r}")
        if not self.symbols:
            raise ConfigError("symbols: universe must not be empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ConfigError("symbols: duplicate symbol in universe")
        if self.timeout <= 0:
            raise ConfigError(f"timeout: must be positive, got {self.timeout}")
        if self.clients < 0:
            raise ConfigError(f"clients: must be non-negative, got {self.clients}")
        for name in ("listen", "connect"):
            try:
                parse_address(getattr(self, name))
            except ValueError as exc:
                raise ConfigError(f"{name}: {exc}") from None
        return self


def parse_address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"expected host:port, got {text!r}")
    try:
        port_no = int(port)
    except ValueError:
        raise ValueError(f"bad port in {text!r}") from None
    if not 0 <= port_no < 65536:
        raise ValueError(f"port out of range in {text!r}")
    return host, port_no


def _convert(name: str, raw, kind):
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "seed":
            if raw is None or raw == "":
                return None
            if isinstance(raw, bytes):
                return raw
            return bytes.fromhex(raw)
        if kind == "symbols":
            if isinstance(raw, str):
                return [s.strip() for s in raw.split(",") if s.strip()]
            return [str(s) for s in raw]
        return str(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


_FIELD_KINDS = {
    "n": "int",
    "mode": "str",
    "params": "str",
    "listen": "str",
    "connect": "str",
    "symbols": "symbols",
    "seed": "seed",
    "timeout": "float",
    "clients": "int",
    "window": "float",
}


def load_config(path=None, env=None, overrides=None) -> Config:
    """Build a validated Config from file, environment, and overrides."""
    values: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError("config file: top level must be an object")
        for key, raw in data.items():
            if key not in _FIELD_KINDS:
                raise ConfigError(f"{key}: unknown configuration field")
            values[key] = _convert(key, raw, _FIELD_KINDS[key])
    env = os.environ if env is None else env
    for name, kind in _FIELD_KINDS.items():
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = _convert(name, raw, kind)
    for name, raw in (overrides or {}).items():
        if raw is None:
            continue
        values[name] = _convert(name, raw, _FIELD_KINDS[name])
    return Config(**values).validate()
