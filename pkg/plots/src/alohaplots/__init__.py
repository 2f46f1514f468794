"""Rendering of simulator result CSVs to deterministic SVG figures."""

from .figures import KINDS, build_figure, save_figure, series_label
from .io import EmptyDataError, SchemaError, read_rows

__all__ = [
    "KINDS",
    "EmptyDataError",
    "SchemaError",
    "build_figure",
    "read_rows",
    "save_figure",
    "series_label",
]
