"""Figure construction from result rows.

Rendering is read-only over the input rows: series are grouped and sorted,
never recomputed. All styling is fixed so the same rows always produce the
same image.
"""

import matplotlib
from matplotlib.figure import Figure

from .io import REQUIRED_COLUMNS, EmptyDataError, SchemaError

# Stable element ids inside the SVG writer; re-renders stay byte-identical.
matplotlib.rcParams["svg.hashsalt"] = "alohaplots"

KINDS = tuple(REQUIRED_COLUMNS)
_LOAD_LABEL = "offered load G [pkt/slot]"
_VALUE_COLUMNS = {"throughput": "throughput", "plr": "plr", "efficiency": "eta"}
_VALUE_LABELS = {
    "throughput": "throughput [pkt/slot]",
    "plr": "packet loss rate",
    "efficiency": "normalized efficiency",
}
_EQUILIBRIUM_MARKERS = (("stable", "o"), ("unstable", "x"), ("tangent", "s"))


def series_label(scheme: str, dist: str, snr_db: str, with_snr: bool) -> str:
    label = "SA" if scheme == "SA" else f"{scheme}({dist})"
    if with_snr and snr_db:
        label += f" @{snr_db}dB"
    return label


def _draw_sweep(ax, rows, value_column):
    groups: dict[tuple[str, str, str], list[dict]] = {}
    for row in rows:
        key = (row["scheme"], row["dist"], row.get("snr_db", ""))
        groups.setdefault(key, []).append(row)
    with_snr = len({key[2] for key in groups}) > 1
    for key in sorted(groups):
        points = sorted(groups[key], key=lambda r: float(r["G"]))
        ax.plot(
            [float(r["G"]) for r in points],
            [float(r[value_column]) for r in points],
            marker="o",
            markersize=3,
            label=series_label(*key, with_snr),
        )
    ax.set_xlabel(_LOAD_LABEL)


def _draw_stability(ax, rows):
    contour = [r for r in rows if not r["kind"]]
    equilibria = [r for r in rows if r["kind"]]
    if not contour:
        raise EmptyDataError("stability input has no contour rows (rows with empty kind)")
    contour.sort(key=lambda r: float(r["n_b"]))
    backlog = [float(r["n_b"]) for r in contour]
    ax.plot(backlog, [float(r["throughput"]) for r in contour], label="throughput")
    ax.plot(
        backlog,
        [float(r["g_tx"]) for r in contour],
        linestyle="--",
        label="fresh load",
    )
    for kind, marker in _EQUILIBRIUM_MARKERS:
        selected = [r for r in equilibria if r["kind"] == kind]
        if not selected:
            continue
        ax.scatter(
            [float(r["n_b"]) for r in selected],
            [float(r["g_tx"]) for r in selected],
            marker=marker,
            s=60,
            zorder=3,
            label=f"{kind} equilibrium",
        )
    ax.set_xlabel("backlogged users")
    ax.set_ylabel("load / throughput [pkt/slot]")


def build_figure(kind: str, rows: list[dict]) -> Figure:
    """Render one figure kind from validated rows and return the Figure."""
    if kind not in KINDS:
        raise SchemaError(f"unknown figure kind {kind!r}, expected one of {sorted(KINDS)}")
    if not rows:
        raise EmptyDataError("no rows to plot")
    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.subplots()
    if kind == "stability":
        _draw_stability(ax, rows)
    else:
        _draw_sweep(ax, rows, _VALUE_COLUMNS[kind])
        ax.set_ylabel(_VALUE_LABELS[kind])
        if kind == "plr":
            ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def save_figure(fig: Figure, path: str, dpi: int = 150) -> None:
    """Write SVG (vector, default) or PNG (raster opt-in) with no timestamps."""
    if path.endswith(".png"):
        fig.savefig(path, dpi=dpi)
    else:
        fig.savefig(path, format="svg", metadata={"Date": None})
