"""CSV loading and schema validation for the plotting pipeline.

The input files are the sweep and stability CSVs written by the simulator
CLI; rows pass through untouched (the renderer only groups and sorts).
"""

import csv

REQUIRED_COLUMNS = {
    "throughput": ("scheme", "dist", "G", "throughput"),
    "plr": ("scheme", "dist", "G", "plr"),
    "efficiency": ("scheme", "dist", "G", "snr_db", "eta"),
    "stability": ("n_b", "g_tx", "g_total", "throughput", "kind"),
}


class SchemaError(ValueError):
    """The input CSV lacks a column the requested figure kind needs."""


class EmptyDataError(ValueError):
    """The input CSV holds no data rows."""


def read_rows(path: str, kind: str) -> list[dict]:
    """Read one result CSV, skipping comment lines, and validate its header."""
    if kind not in REQUIRED_COLUMNS:
        raise SchemaError(f"unknown figure kind {kind!r}, expected one of {sorted(REQUIRED_COLUMNS)}")
    with open(path, newline="") as handle:
        reader = csv.DictReader(line for line in handle if not line.startswith("#"))
        rows = list(reader)
        header = reader.fieldnames
    if header is None:
        raise EmptyDataError(f"{path} is empty")
    missing = [column for column in REQUIRED_COLUMNS[kind] if column not in header]
    if missing:
        raise SchemaError(f"{path} lacks column(s) {', '.join(missing)} required for {kind!r}")
    if not rows:
        raise EmptyDataError(f"{path} has a header but no data rows")
    return rows
