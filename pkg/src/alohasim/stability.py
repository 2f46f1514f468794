"""Equilibrium analysis of a retransmission channel against a throughput curve.

A finite population of ``M`` users offers fresh traffic with probability
``p_tx`` per user and slot while backlogged users retry with ``p_retx``.
Equilibria are backlog sizes where fresh traffic exactly matches the
throughput the channel sustains at the combined load; their character is
decided by which side outgrows the other just next to the root.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

import numpy as np

from .errors import CoverageError

ROOT_TOLERANCE = 1e-6

KIND_STABLE = "stable"
KIND_UNSTABLE = "unstable"


class LoadModel(Protocol):
    """Anything that maps a backlog size to offered loads."""

    population: int

    def g_tx(self, n_backlogged): ...

    def g_retx(self, n_backlogged): ...

    def g_total(self, n_backlogged): ...


@dataclass(frozen=True)
class PopulationModel:
    """Linear finite-population load model."""

    population: int
    p_tx: float
    p_retx: float

    def __post_init__(self) -> None:
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population!r}")
        for name in ("p_tx", "p_retx"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    def g_tx(self, n_backlogged):
        return (self.population - n_backlogged) * self.p_tx

    def g_retx(self, n_backlogged):
        return n_backlogged * self.p_retx

    def g_total(self, n_backlogged):
        return self.g_tx(n_backlogged) + self.g_retx(n_backlogged)


def offered_loads(model: LoadModel, n_backlogged: float) -> tuple[float, float, float]:
    """(fresh, retransmission, total) load at a given backlog size."""
    if not 0 <= n_backlogged <= model.population:
        raise ValueError(
            f"backlog must lie in [0, {model.population}], got {n_backlogged!r}"
        )
    return (
        float(model.g_tx(n_backlogged)),
        float(model.g_retx(n_backlogged)),
        float(model.g_total(n_backlogged)),
    )


@dataclass(frozen=True)
class ThroughputCurve:
    """Piecewise-linear throughput as a function of total channel load."""

    loads: tuple[float, ...]
    throughputs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.loads) != len(self.throughputs):
            raise ValueError("loads and throughputs must have equal length")
        if len(self.loads) < 2:
            raise ValueError("a curve needs at least two samples")
        loads = tuple(float(g) for g in self.loads)
        throughputs = tuple(float(t) for t in self.throughputs)
        if any(b <= a for a, b in zip(loads, loads[1:])):
            raise ValueError("curve loads must be strictly increasing")
        for g, t in zip(loads, throughputs):
            if t < 0:
                raise ValueError(f"throughput must be >= 0, got {t!r} at load {g!r}")
            if t > g + 1e-9:
                raise ValueError(f"throughput {t!r} exceeds load {g!r}")
        object.__setattr__(self, "loads", loads)
        object.__setattr__(self, "throughputs", throughputs)
        object.__setattr__(self, "_loads_arr", np.asarray(loads))
        object.__setattr__(self, "_throughputs_arr", np.asarray(throughputs))

    @classmethod
    def from_samples(cls, samples: Iterable[tuple[float, float]]) -> "ThroughputCurve":
        """Build a curve from measured (load, throughput) samples.

        Arrival noise can push a lossless point's measured throughput a
        hair above its load; samples are projected back onto the feasible
        region (throughput at most load) before validation.
        """
        ordered = sorted((float(g), float(t)) for g, t in samples)
        return cls(tuple(g for g, _ in ordered), tuple(min(t, g) for g, t in ordered))

    @property
    def domain(self) -> tuple[float, float]:
        return self.loads[0], self.loads[-1]

    def covers(self, lo: float, hi: float) -> bool:
        return self.loads[0] <= lo and hi <= self.loads[-1]

    def interpolate(self, load):
        """Piecewise-linear throughput at ``load``; extrapolation is refused."""
        arr = np.asarray(load, dtype=float)
        if arr.size and (arr.min() < self.loads[0] or arr.max() > self.loads[-1]):
            raise CoverageError(
                f"load {arr.min():g}..{arr.max():g} outside curve domain "
                f"{self.loads[0]:g}..{self.loads[-1]:g}"
            )
        result = np.interp(arr, self._loads_arr, self._throughputs_arr)
        return float(result) if np.isscalar(load) or arr.ndim == 0 else result


@dataclass(frozen=True)
class EquilibriumPoint:
    """A backlog size where fresh traffic equals sustained throughput."""

    n_backlogged: float
    g_tx: float
    g_retx: float
    g_total: float
    throughput: float
    kind: str
    tangent: bool = False


def _mismatch(model: LoadModel, curve: ThroughputCurve, n):
    return model.g_tx(n) - curve.interpolate(model.g_total(n))


def classify_equilibrium(
    model: LoadModel, curve: ThroughputCurve, n_star: float, epsilon: float
) -> tuple[str, bool]:
    """Character of the root at ``n_star``: (kind, tangent flag).

    A sink has fresh traffic above throughput just below the root and
    below it just above, so the backlog drifts back; reversed signs mark a
    source.  Probes falling outside ``[0, population]`` are dropped
    (one-sided classification at the boundary), and a root whose
    neighbourhood does not change sign is degenerate: reported unstable
    with the tangent flag raised.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon!r}")
    below = _mismatch(model, curve, n_star - epsilon) if n_star - epsilon >= 0 else None
    above = _mismatch(model, curve, n_star + epsilon) if n_star + epsilon <= model.population else None
    if below is None and above is None:
        raise ValueError("epsilon too large: no probe point inside the domain")
    sink_below = below is None or below > 0
    sink_above = above is None or above < 0
    source_below = below is None or below < 0
    source_above = above is None or above > 0
    if sink_below and sink_above:
        return KIND_STABLE, False
    if source_below and source_above:
        return KIND_UNSTABLE, False
    return KIND_UNSTABLE, True


def find_equilibria(
    model: LoadModel,
    curve: ThroughputCurve,
    grid_points: int = 2001,
    epsilon: float | None = None,
) -> list[EquilibriumPoint]:
    """All equilibria over backlog sizes 0..population, classified.

    Roots are located by a sign-change scan over a uniform backlog grid
    followed by bisection; the curve must cover every total load the
    model can produce (no extrapolation).
    """
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points!r}")
    population = model.population
    ns = np.linspace(0.0, population, grid_points)
    g_totals = np.asarray(model.g_total(ns), dtype=float)
    lo, hi = float(g_totals.min()), float(g_totals.max())
    if not curve.covers(lo, hi):
        raise CoverageError(
            f"model loads span {lo:g}..{hi:g} but curve only covers "
            f"{curve.domain[0]:g}..{curve.domain[1]:g}"
        )
    mismatch = np.asarray(model.g_tx(ns), dtype=float) - curve.interpolate(g_totals)
    step = ns[1] - ns[0]
    if epsilon is None:
        epsilon = step / 4.0
    roots: list[float] = []
    for i in np.flatnonzero(mismatch == 0.0):
        roots.append(float(ns[i]))
    for i in np.flatnonzero(mismatch[:-1] * mismatch[1:] < 0.0):
        a, b = float(ns[i]), float(ns[i + 1])
        fa = float(mismatch[i])
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = _mismatch(model, curve, mid)
            if fm == 0.0 or (b - a) < ROOT_TOLERANCE * 1e-3:
                a = b = mid
                break
            if (fa > 0) == (fm > 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > step / 2.0:
            deduped.append(r)
    points = []
    for r in deduped:
        kind, tangent = classify_equilibrium(model, curve, r, epsilon)
        g_tx, g_retx, g_total = offered_loads(model, r)
        points.append(
            EquilibriumPoint(
                n_backlogged=r,
                g_tx=g_tx,
                g_retx=g_retx,
                g_total=g_total,
                throughput=curve.interpolate(g_total),
                kind=kind,
                tangent=tangent,
            )
        )
    return points


def global_stability(points: Sequence[EquilibriumPoint]) -> bool:
    """True when exactly one equilibrium exists and it is a clean sink."""
    return len(points) == 1 and points[0].kind == KIND_STABLE and not points[0].tangent


@dataclass(frozen=True)
class ContourPoint:
    """One tabulated backlog point of the equilibrium contour."""

    n_backlogged: float
    g_tx: float
    g_retx: float
    g_total: float
    throughput: float


def equilibrium_contour(
    model: LoadModel, curve: ThroughputCurve, backlog_grid: Iterable[float]
) -> list[ContourPoint]:
    """Tabulate sustained throughput and offered loads along a backlog grid."""
    rows = []
    for n in backlog_grid:
        g_tx, g_retx, g_total = offered_loads(model, float(n))
        rows.append(
            ContourPoint(
                n_backlogged=float(n),
                g_tx=g_tx,
                g_retx=g_retx,
                g_total=g_total,
                throughput=curve.interpolate(g_total),
            )
        )
    return rows
