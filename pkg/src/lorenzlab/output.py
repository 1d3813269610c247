"""CSV/JSON emission at full double precision, plus the run manifest."""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .dynamics import Trajectory


def fmt(value) -> str:
    """Full-precision decimal text: 17 significant digits round-trips a double."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def write_csv(path: Path, header: Sequence[str],
              rows: Iterable[Sequence]) -> int:
    """Write rows (any mix of floats/ints/strings); returns the row count."""
    n = 0
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
            n += 1
    return n


def write_trajectory_csv(path: Path, traj: Trajectory) -> int:
    return write_csv(path, ("t", "x", "y", "z"),
                     ((t, s[0], s[1], s[2])
                      for t, s in zip(traj.times, traj.states)))


def write_events_csv(path: Path, traj: Trajectory) -> int:
    return write_csv(path, ("t", "x", "y", "z", "tag"),
                     ((e.t, e.state.x, e.state.y, e.state.z, e.tag)
                      for e in traj.events))


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy scalars and arrays
        return _jsonable(obj.tolist())
    if hasattr(obj, "_asdict"):  # NamedTuple
        return {k: _jsonable(v) for k, v in obj._asdict().items()}
    return obj


def write_json(path: Path, payload) -> int:
    data = _jsonable(payload)
    path.write_text(json.dumps(data, indent=2, sort_keys=False) + "\n",
                    encoding="utf-8")
    return 1


class OutputDir:
    """Collects emitted files and row counts for the manifest."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.files: list[dict] = []

    def path(self, name: str) -> Path:
        return self.root / name

    def csv(self, name: str, header: Sequence[str],
            rows: Iterable[Sequence]) -> Path:
        p = self.path(name)
        n = write_csv(p, header, rows)
        self.files.append({"name": name, "rows": n})
        return p

    def trajectory(self, name: str, traj: Trajectory) -> Path:
        p = self.path(name)
        n = write_trajectory_csv(p, traj)
        self.files.append({"name": name, "rows": n})
        return p

    def events(self, name: str, traj: Trajectory) -> Path:
        p = self.path(name)
        n = write_events_csv(p, traj)
        self.files.append({"name": name, "rows": n})
        return p

    def json(self, name: str, payload) -> Path:
        p = self.path(name)
        write_json(p, payload)
        self.files.append({"name": name, "rows": 1})
        return p

    def write_manifest(self, config, version: str, timings: dict) -> Path:
        manifest = {
            "config": _jsonable(config),
            "toolkit_version": version,
            "timings_seconds": {k: round(v, 3) for k, v in timings.items()},
            "files": list(self.files),
        }
        p = self.path("manifest.json")
        write_json(p, manifest)
        return p
