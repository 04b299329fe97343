"""Figures from rate-coverage sweep CSVs."""

from .figures import Curve, FigureKind, FigureSpec, build_curves, render
from .schema import CSV_COLUMNS, SchemaError, SweepRow, read_rows

__all__ = [
    "CSV_COLUMNS",
    "Curve",
    "FigureKind",
    "FigureSpec",
    "SchemaError",
    "SweepRow",
    "build_curves",
    "read_rows",
    "render",
]

__version__ = "0.1.0"
