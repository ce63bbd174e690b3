"""Transient traces: (t, v, i, w, dw/dt) samples plus run metadata.

CSV serialization uses shortest-round-trip float formatting, LF line
endings and a mandatory `t,v,i,w,dwdt` header so regression baselines are
bit-exact across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

COLUMNS = ("t", "v", "i", "w", "dwdt")


@dataclass
class Trace:
    t: np.ndarray
    v: np.ndarray
    i: np.ndarray
    w: np.ndarray
    dwdt: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in COLUMNS[1:]:
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name!r} length differs from t")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    def write_csv(self, path: str | Path) -> None:
        lines = [",".join(COLUMNS)]
        for k in range(len(self.t)):
            lines.append(",".join(
                repr(float(col[k]))
                for col in (self.t, self.v, self.i, self.w, self.dwdt)))
        Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))

    def write_metadata(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")

    @classmethod
    def read_csv(cls, path: str | Path, metadata: dict | None = None) -> "Trace":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"trace file not found: {path}")
        with path.open() as fh:
            header = fh.readline().strip()
            names = tuple(h.strip() for h in header.split(","))
            for required in COLUMNS:
                if required not in names:
                    raise ConfigError(f"trace CSV {path} missing column {required!r}")
            rows = []
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != len(names):
                    raise ConfigError(f"{path}:{lineno}: expected {len(names)} fields")
                try:
                    rows.append([float(p) for p in parts])
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        if metadata is None:
            meta_path = path.with_suffix(".meta.json")
            metadata = json.loads(meta_path.read_text()) if meta_path.is_file() else {}
        data = np.asarray(rows, dtype=float).reshape(-1, len(names))
        cols = {name: data[:, k] for k, name in enumerate(names)}
        return cls(t=cols["t"], v=cols["v"], i=cols["i"], w=cols["w"],
                   dwdt=cols["dwdt"], metadata=metadata)
