"""Simulation engine: configured runs, single points, and load sweeps."""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .decoder import SlotGrid, SwDecoder, fb_decode
from .degree import DegreeDistribution, make_regular
from .errors import ConfigurationError
from .metrics import RunStats
from .traffic import draw_arrival_counts, sample_frame_slots, sample_window_slots

SCHEME_SA = "SA"
SCHEME_FB = "FB"
SCHEME_SW = "SW"
SCHEMES = (SCHEME_SA, SCHEME_FB, SCHEME_SW)

_SINGLE_COPY = make_regular(1)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one simulation experiment.

    ``window_slots`` is the frame length for the frame-based scheme and
    the placement window span for the sliding-window scheme.  The
    single-copy scheme always uses the degree-1 distribution, whatever
    was passed in.
    """

    scheme: str
    distribution: DegreeDistribution
    loads: tuple[float, ...]
    snr_dbs: tuple[float, ...] = ()
    window_slots: int = 200
    max_iterations: int = 50
    memory_multiplier: int = 5
    total_slots: int = 200_000
    warmup_slots: int | None = None
    seed: int = 0
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        if self.scheme == SCHEME_SA:
            object.__setattr__(self, "distribution", _SINGLE_COPY)
        if self.window_slots < 1:
            raise ConfigurationError(f"window must be >= 1 slot, got {self.window_slots!r}")
        if self.max_iterations < 1:
            raise ConfigurationError(f"iteration budget must be >= 1, got {self.max_iterations!r}")
        if self.memory_multiplier < 1:
            raise ConfigurationError(
                f"memory multiplier must be >= 1, got {self.memory_multiplier!r}"
            )
        if self.total_slots < 1:
            raise ConfigurationError(f"total slots must be >= 1, got {self.total_slots!r}")
        if self.warmup_slots is None:
            object.__setattr__(self, "warmup_slots", 10 * self.window_slots)
        if not 0 <= self.warmup_slots < self.total_slots:
            raise ConfigurationError(
                f"warm-up must lie in [0, total_slots), got {self.warmup_slots!r}"
            )
        if not 0.0 < self.confidence < 1.0:
            raise ConfigurationError(f"confidence must lie in (0, 1), got {self.confidence!r}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be >= 0, got {self.seed!r}")
        for load in self.loads:
            if load < 0:
                raise ConfigurationError(f"offered load must be >= 0, got {load!r}")
        if self.distribution.max_degree > self.window_slots:
            raise ConfigurationError(
                f"max degree {self.distribution.max_degree} does not fit "
                f"{self.window_slots} slots"
            )

    @property
    def buffer_capacity(self) -> int:
        return self.memory_multiplier * self.window_slots


@dataclass(frozen=True)
class PointResult:
    """One simulated operating point plus the context needed to report it."""

    scheme: str
    dist_label: str
    mean_degree: float
    load: float
    seed: int
    stats: RunStats


def point_seed(master_seed: int, scheme: str, dist_label: str, load: float) -> int:
    """Stable 64-bit per-point seed.

    Derived from the load value itself (not its grid position) so sweep
    points are independent of grid order and of each other.
    """
    load_bits = int(np.float64(load).view(np.uint64))
    text = f"{master_seed}|{scheme}|{dist_label}|{load_bits:016x}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _measured_sent(counts: np.ndarray, warmup_slots: int) -> int:
    return int(counts[warmup_slots:].sum())


def _run_sliding(config: ExperimentConfig, load: float, rng: np.random.Generator) -> RunStats:
    window = config.window_slots
    warmup = config.warmup_slots
    counts = draw_arrival_counts(load, config.total_slots, rng)
    n_packets = int(counts.sum())
    degrees = config.distribution.sample_degrees(rng.random(n_packets)).tolist()
    decoder = SwDecoder(config.buffer_capacity, config.max_iterations, retain_history=False)

    ring_size = window + 1
    ring: list[list] = [[] for _ in range(ring_size)]
    ready: list[int] = []
    arrival_slots = np.flatnonzero(counts).tolist()
    arrival_counts = counts[arrival_slots].tolist() if arrival_slots else []
    next_group = 0
    n_groups = len(arrival_slots)
    packet = 0
    decoded_measured = 0
    delay_sum = 0
    span = (arrival_slots[-1] + window + 1) if n_groups else 0
    for t in range(span):
        index = t % ring_size
        cell = ring[index]
        if cell:
            ring[index] = []
            for packet_id in decoder.ingest(t, cell):
                ready_slot = ready[packet_id]
                if ready_slot >= warmup:
                    decoded_measured += 1
                    delay_sum += t - ready_slot
        if next_group < n_groups and arrival_slots[next_group] == t:
            for _ in range(arrival_counts[next_group]):
                slots = sample_window_slots(degrees[packet], t, window, rng)
                entry = (packet, slots)
                for s in slots:
                    ring[s % ring_size].append(entry)
                ready.append(t)
                packet += 1
            next_group += 1
    for packet_id, emit_slot in decoder.finish():
        ready_slot = ready[packet_id]
        if ready_slot >= warmup:
            decoded_measured += 1
            delay_sum += emit_slot - ready_slot
    if decoder.n_decoded + decoder.n_lost != n_packets or decoder.n_pending != 0:
        raise AssertionError(
            f"packet conservation violated: {n_packets} sent, "
            f"{decoder.n_decoded} decoded, {decoder.n_lost} lost, "
            f"{decoder.n_pending} pending"
        )
    sent = _measured_sent(counts, warmup)
    return RunStats.from_counts(
        offered_load=load,
        measured_slots=config.total_slots - warmup,
        packets_sent=sent,
        packets_decoded=decoded_measured,
        packets_lost=sent - decoded_measured,
        delay_sum=delay_sum,
        confidence=config.confidence,
    )


def _run_framed(config: ExperimentConfig, load: float, rng: np.random.Generator) -> RunStats:
    window = config.window_slots
    warmup = config.warmup_slots
    counts = draw_arrival_counts(load, config.total_slots, rng)
    n_packets = int(counts.sum())
    degrees = config.distribution.sample_degrees(rng.random(n_packets)).tolist()

    decoded_measured = 0
    delay_sum = 0
    decoded_total = 0
    resolved_total = 0
    ready: list[int] = []
    frame_items: list[tuple[int, tuple[int, ...]]] = []
    current_frame_start = None
    arrival_slots = np.flatnonzero(counts).tolist()
    arrival_counts = counts[arrival_slots].tolist() if arrival_slots else []
    packet = 0

    def flush() -> None:
        nonlocal decoded_measured, delay_sum, decoded_total, resolved_total
        grid = SlotGrid()
        for packet_id, slots in frame_items:
            grid.add(packet_id, slots)
        decoded, lost = fb_decode(grid, config.max_iterations)
        resolved_total += len(decoded) + len(lost)
        decoded_total += len(decoded)
        emit_slot = current_frame_start + window - 1
        for packet_id in decoded:
            ready_slot = ready[packet_id]
            if ready_slot >= warmup:
                decoded_measured += 1
                delay_sum += emit_slot - ready_slot

    for slot, count in zip(arrival_slots, arrival_counts):
        frame_start = (slot // window + 1) * window
        if frame_start != current_frame_start:
            if frame_items:
                flush()
                frame_items.clear()
            current_frame_start = frame_start
        for _ in range(count):
            slots = sample_frame_slots(degrees[packet], frame_start, window, rng)
            frame_items.append((packet, slots))
            ready.append(slot)
            packet += 1
    if frame_items:
        flush()
    if resolved_total != n_packets:
        raise AssertionError(
            f"packet conservation violated: {n_packets} sent, {resolved_total} resolved"
        )
    sent = _measured_sent(counts, warmup)
    return RunStats.from_counts(
        offered_load=load,
        measured_slots=config.total_slots - warmup,
        packets_sent=sent,
        packets_decoded=decoded_measured,
        packets_lost=sent - decoded_measured,
        delay_sum=delay_sum,
        confidence=config.confidence,
    )


def run_point(config: ExperimentConfig, load: float) -> PointResult:
    """Simulate one (scheme, distribution, load) point deterministically."""
    if load < 0:
        raise ConfigurationError(f"offered load must be >= 0, got {load!r}")
    seed = point_seed(config.seed, config.scheme, config.distribution.label, load)
    rng = np.random.default_rng(seed)
    if config.scheme == SCHEME_FB:
        stats = _run_framed(config, load, rng)
    else:
        stats = _run_sliding(config, load, rng)
    return PointResult(
        scheme=config.scheme,
        dist_label=config.distribution.label,
        mean_degree=config.distribution.mean_degree,
        load=load,
        seed=seed,
        stats=stats,
    )


def _run_point_task(args: tuple[ExperimentConfig, float]) -> PointResult:
    return run_point(*args)


def sweep(config: ExperimentConfig, workers: int = 1) -> list[PointResult]:
    """Simulate every configured load; results come back in grid order.

    ``workers=0`` picks one worker per CPU.  Every point derives its own
    seed, so the worker count and grid order cannot change any row.
    """
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers < 0:
        raise ConfigurationError(f"worker count must be >= 0, got {workers!r}")
    tasks = [(config, load) for load in config.loads]
    if workers == 1 or len(tasks) <= 1:
        return [run_point(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_point_task, tasks))


def single_copy_config(config: ExperimentConfig) -> ExperimentConfig:
    """The same experiment with the single-copy scheme (reference series)."""
    return replace(config, scheme=SCHEME_SA, distribution=_SINGLE_COPY)
