"""Arrival sampling and replica slot placement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class PacketArrival:
    """A packet whose content became ready at the end of ``ready_slot``."""

    packet_id: int
    ready_slot: int


@dataclass(frozen=True)
class ReplicaPlacement:
    """Replica slots chosen for one packet; sorted and pairwise distinct."""

    packet_id: int
    slots: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.slots)


def draw_arrival_counts(load: float, n_slots: int, rng: np.random.Generator) -> np.ndarray:
    """Per-slot Poisson arrival counts with mean ``load`` packets per slot."""
    if load < 0:
        raise ValueError(f"offered load must be >= 0, got {load!r}")
    if n_slots < 0:
        raise ValueError(f"slot count must be >= 0, got {n_slots!r}")
    return rng.poisson(load, n_slots)


def next_frame_start(ready_slot: int, frame_slots: int) -> int:
    """First slot of the earliest frame that starts strictly after ``ready_slot``."""
    if frame_slots < 1:
        raise ValueError(f"frame length must be >= 1, got {frame_slots!r}")
    if ready_slot < 0:
        raise ValueError(f"ready slot must be >= 0, got {ready_slot!r}")
    return (ready_slot // frame_slots + 1) * frame_slots


def _distinct_uniform(count: int, low: int, span: int, rng: np.random.Generator) -> set[int]:
    # Sequential draws, ignoring repeats: uniform over size-``count`` subsets.
    chosen: set[int] = set()
    while len(chosen) < count:
        chosen.add(low + int(rng.integers(span)))
    return chosen


def sample_frame_slots(
    degree: int, frame_start: int, frame_slots: int, rng: np.random.Generator
) -> tuple[int, ...]:
    """``degree`` distinct slots drawn uniformly within one frame."""
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree!r}")
    if degree > frame_slots:
        raise ConfigurationError(f"degree {degree} does not fit a {frame_slots}-slot frame")
    return tuple(sorted(_distinct_uniform(degree, frame_start, frame_slots, rng)))


def sample_window_slots(
    degree: int, ready_slot: int, window_slots: int, rng: np.random.Generator
) -> tuple[int, ...]:
    """First copy in the slot right after ready; the rest uniform in the window.

    The remaining ``degree - 1`` copies land on distinct slots in
    ``(ready_slot + 1, ready_slot + window_slots]``.
    """
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree!r}")
    if degree > window_slots:
        raise ConfigurationError(f"degree {degree} does not fit a {window_slots}-slot window")
    first = ready_slot + 1
    if degree == 1:
        return (first,)
    extras = _distinct_uniform(degree - 1, ready_slot + 2, window_slots - 1, rng)
    return (first, *sorted(extras))


def place_fb(
    packet_id: int, degree: int, frame_start: int, frame_slots: int, rng: np.random.Generator
) -> ReplicaPlacement:
    """Frame-based placement: replicas anywhere in the target frame."""
    return ReplicaPlacement(packet_id, sample_frame_slots(degree, frame_start, frame_slots, rng))


def place_sw(
    packet_id: int, degree: int, ready_slot: int, window_slots: int, rng: np.random.Generator
) -> ReplicaPlacement:
    """Sliding-window placement anchored right after the ready slot."""
    return ReplicaPlacement(packet_id, sample_window_slots(degree, ready_slot, window_slots, rng))
