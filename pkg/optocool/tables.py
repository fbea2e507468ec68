"""
Tabular results and their on-disk formats.

CSV: comma separated, LF line endings, a header row, floats printed with 17
significant digits, complex columns split into ``<name>_re`` / ``<name>_im``.
JSON: ``{"meta": ..., "columns": [...], "rows": [[...], ...]}`` with
non-finite numbers written as ``null``.
"""
from __future__ import annotations

import io
import json
import logging
import math
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from .moments import MOMENT_NAMES

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.17g"
FORMATS = ("csv", "json")


@dataclass
class SweepTable:
    """Ordered columns and one row per evaluated point."""
    frame: pd.DataFrame
    meta: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return [str(c) for c in self.frame.columns]

    @property
    def rows(self) -> list[tuple]:
        return list(self.frame.itertuples(index=False, name=None))

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy()

    def select(self, columns: list[str], rename: Optional[dict] = None) -> "SweepTable":
        frame = self.frame[columns]
        if rename:
            frame = frame.rename(columns=rename)
        return SweepTable(frame.reset_index(drop=True), dict(self.meta))

    def __len__(self) -> int:
        return len(self.frame)


def _split_complex(frame: pd.DataFrame) -> pd.DataFrame:
    out = {}
    for name in frame.columns:
        values = frame[name]
        if np.iscomplexobj(values.to_numpy()):
            out[f"{name}_re"] = np.real(values.to_numpy())
            out[f"{name}_im"] = np.imag(values.to_numpy())
        else:
            out[name] = values
    return pd.DataFrame(out)


def _join_complex(frame: pd.DataFrame) -> pd.DataFrame:
    out = {}
    for name in frame.columns:
        if name.endswith("_im") and f"{name[:-3]}_re" in frame.columns:
            continue
        if name.endswith("_re") and f"{name[:-3]}_im" in frame.columns:
            base = name[:-3]
            out[base] = frame[name].to_numpy() + 1j * frame[f"{base}_im"].to_numpy()
        else:
            out[name] = frame[name]
    return pd.DataFrame(out)


def to_csv(table: SweepTable) -> str:
    frame = _split_complex(table.frame)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_csv(source) -> SweepTable:
    """Inverse of :func:`to_csv`; ``source`` is a path or an open text stream."""
    frame = pd.read_csv(source, float_precision="round_trip")
    for name in frame.columns:
        if frame[name].dtype == object:
            frame[name] = frame[name].fillna("")
    return SweepTable(_join_complex(frame))


def build_info() -> str:
    """``git describe`` of the source tree, or the package version outside a checkout."""
    from . import __version__
    try:
        result = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5, check=True)
    except (OSError, subprocess.SubprocessError) as exc:
        logger.debug("git describe unavailable: %s", exc)
        return __version__
    return result.stdout.strip() or __version__


def _jsonable(value: Any) -> Any:
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def to_json(table: SweepTable, config: Optional[dict] = None) -> str:
    frame = _split_complex(table.frame)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "config": config or {},
        "build": build_info(),
    }
    meta.update(table.meta)
    document = {
        "meta": _jsonable(meta),
        "columns": [str(c) for c in frame.columns],
        "rows": [_jsonable(list(row)) for row in frame.itertuples(index=False, name=None)],
    }
    return json.dumps(document, indent=1, allow_nan=False) + "\n"


def write_table(table: SweepTable, path: Optional[str] = None, fmt: str = "csv",
                config: Optional[dict] = None) -> None:
    """Serialize ``table``; ``path=None`` writes to standard output."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")
    text = to_csv(table) if fmt == "csv" else to_json(table, config)
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    if target.parent != Path(""):
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    logger.info("wrote %d rows to %s", len(table), target)


def steady_table(reports) -> SweepTable:
    """One row per :class:`~optocool.observables.SteadyReport`."""
    return SweepTable(pd.DataFrame([report.as_row() for report in reports]))


def trajectory_table(trajectory) -> SweepTable:
    """Time column followed by the ten complex moments of each state."""
    states = trajectory.as_array()
    data = {"t": np.asarray(trajectory.times, dtype=float)}
    for k, name in enumerate(MOMENT_NAMES):
        data[name] = states[:, k]
    return SweepTable(pd.DataFrame(data), {"params": trajectory.params_hash,
                                           "method": trajectory.method})


def frame_from_text(text: str) -> SweepTable:
    return read_csv(io.StringIO(text))
