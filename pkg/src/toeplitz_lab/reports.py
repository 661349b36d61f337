"""Run records, JSON-lines persistence and CSV tables."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

__all__ = [
    "RunRecord",
    "dumps",
    "append_log",
    "default_log_path",
    "TABLE_HEADER",
    "table_csv",
    "parse_table_csv",
]

LOG_ENV = "TOEPLITZ_LAB_LOG"
TABLE_HEADER = ["k", "bound_t22", "sup_t22", "gap_t22", "bound_t31", "sup_t31", "gap_t31"]


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, compact separators, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


@dataclass
class RunRecord:
    command: str
    config: dict
    results: list
    seed: int = 0
    tool_version: str = __version__
    wall_time_ms: int = 0
    timestamp: float = field(default_factory=time.time)

    def payload(self) -> dict:
        """The replayable part of the record; identical across reruns with the same seed."""
        return {
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "seed": self.seed,
            "tool_version": self.tool_version,
        }

    def log_line(self) -> str:
        d = self.payload()
        d["wall_time_ms"] = int(self.wall_time_ms)
        d["timestamp"] = self.timestamp
        return dumps(d)


def default_log_path() -> Path:
    return Path(os.environ.get(LOG_ENV) or "runs.jsonl")


def append_log(record: RunRecord, path: str | os.PathLike | None = None) -> Path:
    path = Path(path) if path is not None else default_log_path()
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record.log_line() + "\n")
    return path


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in TABLE_HEADER])
    return buf.getvalue()


def parse_table_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != TABLE_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    return [{c: (int(r[c]) if c == "k" else float(r[c])) for c in TABLE_HEADER} for r in reader]
