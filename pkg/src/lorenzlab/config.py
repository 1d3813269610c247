"""Run configuration: defaults, flat key=value config files, flag overrides."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import DomainError


@dataclass(frozen=True)
class RunConfig:
    sigma: float = 10.0
    b: float = 8.0 / 3.0
    tol_rel: float = 1e-10
    tol_abs: float = 1e-10
    max_step: float = 0.1
    t_max: float = 1000.0
    out: str = "out"
    battery_budget: int = 100
    seed: int = 0

    def validate(self) -> "RunConfig":
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"b must be positive, got {self.b}")
        for name in ("tol_rel", "tol_abs"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if not (math.isfinite(self.max_step) and self.max_step > 0):
            raise DomainError(f"max_step must be positive, got {self.max_step}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise DomainError(f"t_max must be positive, got {self.t_max}")
        if self.battery_budget < 1:
            raise DomainError(
                f"battery_budget must be >= 1, got {self.battery_budget}")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str, line_no: int):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise DomainError(
            f"malformed value for '{key}' on line {line_no}: {raw!r}")


def load_config(path: str | Path, base: RunConfig = RunConfig()) -> RunConfig:
    """Read a flat `key = value` file with '#' comments over the defaults."""
    text = Path(path).read_text(encoding="utf-8")
    cfg = base
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise DomainError(f"expected 'key = value' on line {line_no}: {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _FIELD_TYPES:
            raise DomainError(f"unknown config key '{key}' on line {line_no}")
        cfg = replace(cfg, **{key: _parse_value(key, raw, line_no)})
    return cfg.validate()


def apply_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Flag-level overrides beat file values; None means 'not given'."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(changes) - set(_FIELD_TYPES)
    if unknown:
        raise DomainError(f"unknown config overrides: {sorted(unknown)}")
    return replace(cfg, **changes).validate()
