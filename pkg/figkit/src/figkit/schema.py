"""Reader for the rate-coverage sweep CSV.

The producer writes a fixed header and one row per sweep point; the Monte
Carlo columns are empty when the sweep ran without simulation. Everything
here is read-only and order-preserving.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

CSV_COLUMNS = (
    "strategy",
    "eta",
    "W_hz",
    "m_bar",
    "rho_bps",
    "pr_analytical",
    "pr_m",
    "pr_s",
    "pr_mc",
    "mc_se",
    "quad_flag",
)


class SchemaError(ValueError):
    """The file does not follow the sweep CSV contract."""


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    eta: float
    w_hz: float
    m_bar: int
    rho_bps: float
    pr_analytical: float
    pr_m: float
    pr_s: float
    pr_mc: float | None
    mc_se: float | None
    quad_flag: str


def _required(record: dict, column: str, line: int) -> float:
    raw = record[column]
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise SchemaError(f"line {line}: column {column} is not a number: {raw!r}") from None


def _optional(record: dict, column: str, line: int) -> float | None:
    raw = record[column]
    if raw is None or raw == "":
        return None
    return _required(record, column, line)


def read_rows(path: str | Path) -> list[SweepRow]:
    """Parse a sweep CSV, keeping row order. Raises SchemaError naming any
    missing column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, expected a header row")
        missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns: {', '.join(missing)}")
        rows = []
        for line, record in enumerate(reader, start=2):
            rows.append(
                SweepRow(
                    strategy=record["strategy"],
                    eta=_required(record, "eta", line),
                    w_hz=_required(record, "W_hz", line),
                    m_bar=int(_required(record, "m_bar", line)),
                    rho_bps=_required(record, "rho_bps", line),
                    pr_analytical=_required(record, "pr_analytical", line),
                    pr_m=_required(record, "pr_m", line),
                    pr_s=_required(record, "pr_s", line),
                    pr_mc=_optional(record, "pr_mc", line),
                    mc_se=_optional(record, "mc_se", line),
                    quad_flag=record["quad_flag"],
                )
            )
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows
