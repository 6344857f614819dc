"""CSV export of correlation traces and benchmark tables.

Each file starts with a ``# schema: <name>/<version>`` line followed by a
fixed header row; readers can skip the first line with ``comment="#"``.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

TRACE_SCHEMA = "prpsk.trace/1"
TRACE_COLUMNS = ("tau", "re", "im", "magnitude", "phase")


def write_trace(out: TextIO, values: Sequence[complex], start: int = 0) -> None:
    """One row per sample: index, real, imaginary, magnitude, phase (rad)."""
    out.write(f"# schema: {TRACE_SCHEMA}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for i, v in enumerate(values):
        v = complex(v)
        w.writerow((start + i, repr(v.real), repr(v.imag), repr(abs(v)), repr(math.atan2(v.imag, v.real))))


def save_trace(path: str | Path, values: Sequence[complex], start: int = 0) -> None:
    with open(path, "w", newline="") as fh:
        write_trace(fh, values, start)


def read_trace(text: str) -> list[complex]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = csv.DictReader(io.StringIO("\n".join(lines)))
    return [complex(float(r["re"]), float(r["im"])) for r in rows]


def write_rows(out: TextIO, schema: str, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    out.write(f"# schema: {schema}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(row)
