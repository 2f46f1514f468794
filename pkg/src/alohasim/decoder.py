"""Peeling decoder with perfect interference cancellation.

Slots hold replica bursts.  Any slot containing exactly one undecoded
burst reveals its packet, and cancelling that packet's remaining replicas
may expose further singleton slots.  ``peel`` drives bounded grids such
as single frames; ``SwDecoder`` maintains the bounded receiver buffer for
stream decoding with first-in-first-out eviction.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Callable, Iterable, Sequence

ORACLE_PACKET_LIMIT = 64

# (slot, packet_id, event, iteration) observer for decode/loss events
EventHook = Callable[[int, int, str, int], None]


class SlotGrid:
    """Bipartite slot/packet structure: slot index -> ids of occupying bursts.

    ``replicas`` maps each resident packet to its placement; removing a
    packet erases it from both sides, so ``packet_ids`` always reflects
    what is still on the grid.
    """

    __slots__ = ("slots", "replicas")

    def __init__(self) -> None:
        self.slots: dict[int, set[int]] = {}
        self.replicas: dict[int, tuple[int, ...]] = {}

    def add(self, packet_id: int, replica_slots: Iterable[int]) -> None:
        slots = tuple(sorted(replica_slots))
        if not slots:
            raise ValueError("a placement needs at least one slot")
        if len(set(slots)) != len(slots):
            raise ValueError(f"replica slots must be distinct, got {slots!r}")
        if packet_id in self.replicas:
            raise ValueError(f"packet {packet_id} placed twice")
        self.replicas[packet_id] = slots
        for s in slots:
            self.slots.setdefault(s, set()).add(packet_id)

    def add_placement(self, placement) -> None:
        self.add(placement.packet_id, placement.slots)

    def remove_packet(self, packet_id: int) -> None:
        for s in self.replicas.pop(packet_id):
            members = self.slots.get(s)
            if members is None:
                continue
            members.discard(packet_id)
            if not members:
                del self.slots[s]

    def packet_ids(self) -> set[int]:
        return set(self.replicas)

    def occupancy(self, slot: int) -> int:
        return len(self.slots.get(slot, ()))

    def copy(self) -> "SlotGrid":
        dup = SlotGrid()
        dup.replicas = dict(self.replicas)
        dup.slots = {s: set(m) for s, m in self.slots.items()}
        return dup


def peel(
    grid: SlotGrid, max_iterations: int, scan_order: Sequence[int] | None = None
) -> tuple[set[int], SlotGrid]:
    """Iteratively decode singleton slots, cancelling replicas between passes.

    Each iteration decodes every slot that held exactly one burst at the
    start of the pass, then removes all replicas of the packets decoded in
    that pass.  Stops at a fixed point or after ``max_iterations`` passes.
    Returns the decoded ids together with ``grid``, which is modified in
    place.  ``scan_order`` only changes the visiting order (a testing
    hook); it cannot change the outcome.
    """
    if max_iterations < 0:
        raise ValueError(f"iteration budget must be >= 0, got {max_iterations!r}")
    decoded: set[int] = set()
    for _ in range(max_iterations):
        if scan_order is None:
            candidates: Iterable[int] = list(grid.slots)
        else:
            candidates = [s for s in scan_order if s in grid.slots]
        newly = {next(iter(grid.slots[s])) for s in candidates if len(grid.slots[s]) == 1}
        if not newly:
            break
        for packet_id in newly:
            grid.remove_packet(packet_id)
        decoded |= newly
    return decoded, grid


def fb_decode(grid: SlotGrid, max_iterations: int) -> tuple[set[int], set[int]]:
    """Decode one frame; every packet left undecoded in the frame is lost."""
    decoded, _ = peel(grid, max_iterations)
    return decoded, grid.packet_ids() - decoded


def oracle_peel(grid: SlotGrid) -> set[int]:
    """Reference fixed point: rescan from scratch after every single decode.

    Deliberately naive and unbounded; limited to small instances.
    """
    if len(grid.replicas) > ORACLE_PACKET_LIMIT:
        raise ValueError(f"oracle instances are limited to {ORACLE_PACKET_LIMIT} packets")
    decoded: set[int] = set()
    progress = True
    while progress:
        progress = False
        for slot in sorted(grid.slots):
            members = grid.slots[slot]
            if len(members) == 1:
                packet_id = next(iter(members))
                grid.remove_packet(packet_id)
                decoded.add(packet_id)
                progress = True
                break
    return decoded


class SwDecoder:
    """Streaming decoder over a bounded, first-in-first-out slot buffer.

    Slots are ingested in strictly increasing index order; skipped indices
    count as empty slots.  Each ingest appends the slot, peels the
    buffered range under a fresh ``max_iterations`` budget, then evicts
    slots older than ``capacity``.  A packet is lost once its last replica
    slot is evicted while undecoded; bursts of unresolved packets keep
    interfering for as long as their slots stay buffered.

    With ``retain_history=False`` the decoder forgets resolved packets as
    soon as they can no longer be referenced, keeping memory bounded by
    the buffer; the ``decoded``/``lost`` id sets are then incomplete and
    only the counters stay exact.
    """

    def __init__(
        self,
        capacity: int,
        max_iterations: int,
        on_event: EventHook | None = None,
        retain_history: bool = True,
    ) -> None:
        if capacity < 1:
            raise ValueError(f"buffer capacity must be >= 1, got {capacity!r}")
        if max_iterations < 1:
            raise ValueError(f"iteration budget must be >= 1, got {max_iterations!r}")
        self.capacity = capacity
        self.max_iterations = max_iterations
        self.on_event = on_event
        self.retain_history = retain_history
        self.newest: int | None = None
        self.grid: dict[int, set[int]] = {}
        self.replicas: dict[int, tuple[int, ...]] = {}
        self.decoded: set[int] = set()
        self.lost: set[int] = set()
        self.n_seen = 0
        self.n_decoded = 0
        self.n_lost = 0
        self.iterations_used = 0
        self._singletons: set[int] = set()
        self._occupied: deque[int] = deque()
        self._retired: list[tuple[int, int]] = []

    @property
    def oldest(self) -> int | None:
        """Oldest slot index still buffered (conceptually; may be empty)."""
        if self.newest is None:
            return None
        return max(self.newest - self.capacity + 1, 0)

    @property
    def n_pending(self) -> int:
        return self.n_seen - self.n_decoded - self.n_lost

    def pending_ids(self) -> set[int]:
        if self.retain_history:
            return set(self.replicas) - self.decoded - self.lost
        return set(self.replicas)

    def ingest(self, slot: int, bursts: Iterable[tuple[int, tuple[int, ...]]]) -> set[int]:
        """Feed the contents of ``slot``; returns the ids decoded right now.

        ``bursts`` lists ``(packet_id, replica_slots)`` for every burst
        transmitted in this slot.  Replicas of already-decoded packets are
        cancelled on arrival.
        """
        if slot < 0:
            raise ValueError(f"slot indices are non-negative, got {slot!r}")
        if self.newest is not None and slot <= self.newest:
            raise ValueError(f"slots must arrive in increasing order ({slot} after {self.newest})")
        if self._singletons and self.newest is not None:
            # A previous budget cut-off left decodable slots behind: the
            # skipped empty slots each grant a fresh peel/evict step.
            t = self.newest
            while t + 1 < slot and self._singletons:
                t += 1
                self.newest = t
                self._peel()
                self._evict()
        self.newest = slot
        members = None
        for packet_id, replica_slots in bursts:
            if packet_id in self.decoded:
                continue
            known = self.replicas.get(packet_id)
            if known is None:
                replica_slots = tuple(replica_slots)
                if slot not in replica_slots:
                    raise ValueError(
                        f"burst of packet {packet_id} arrived in slot {slot} "
                        f"but lists replica slots {replica_slots!r}"
                    )
                self.replicas[packet_id] = replica_slots
                self.n_seen += 1
            elif tuple(replica_slots) != known:
                raise ValueError(f"packet {packet_id} announced two different replica sets")
            if members is None:
                members = self.grid.get(slot)
                if members is None:
                    members = self.grid[slot] = set()
                    self._occupied.append(slot)
            members.add(packet_id)
        if members is not None and len(members) == 1:
            self._singletons.add(slot)
        decoded_now = self._peel()
        self._evict()
        if not self.retain_history:
            self._forget_resolved()
        return decoded_now

    def finish(self) -> list[tuple[int, int]]:
        """Drain the buffer so every pending packet resolves.

        Equivalent to ingesting empty slots until the buffer clears.
        Returns ``(packet_id, emit_slot)`` for packets decoded during the
        drain (possible only after a budget cut-off).
        """
        late: list[tuple[int, int]] = []
        if self.newest is not None:
            t = self.newest
            while self._singletons:
                t += 1
                self.newest = t
                for packet_id in self._peel():
                    late.append((packet_id, t))
                self._evict()
            self.newest = t + self.capacity
            self._evict()
        # Anything still tracked never saw its last replica slot ingested;
        # treat it as lost rather than leaving it unresolved.
        leftovers = self.pending_ids()
        for packet_id in leftovers:
            self.n_lost += 1
            if self.retain_history:
                self.lost.add(packet_id)
            else:
                del self.replicas[packet_id]
            if self.on_event is not None:
                self.on_event(self.newest if self.newest is not None else 0, packet_id, "lost", 0)
        return late

    def _peel(self) -> set[int]:
        decoded_now: set[int] = set()
        rounds = 0
        while self._singletons and rounds < self.max_iterations:
            rounds += 1
            layer = self._singletons
            self._singletons = set()
            progressed = False
            for slot in layer:
                members = self.grid.get(slot)
                if not members or len(members) != 1:
                    continue  # emptied earlier in this same pass
                packet_id = next(iter(members))
                self._cancel(packet_id)
                decoded_now.add(packet_id)
                progressed = True
                if self.on_event is not None:
                    self.on_event(slot, packet_id, "decoded", rounds)
            if not progressed:
                break
            self.iterations_used += 1
        return decoded_now

    def _cancel(self, packet_id: int) -> None:
        self.decoded.add(packet_id)
        self.n_decoded += 1
        if self.retain_history:
            replica_slots = self.replicas[packet_id]
        else:
            replica_slots = self.replicas.pop(packet_id)
            heapq.heappush(self._retired, (replica_slots[-1], packet_id))
        for r in replica_slots:
            members = self.grid.get(r)
            if members is None:
                continue
            members.discard(packet_id)
            count = len(members)
            if count == 1:
                self._singletons.add(r)
            elif count == 0:
                del self.grid[r]
                self._singletons.discard(r)

    def _evict(self) -> None:
        frontier = self.newest - self.capacity + 1
        occupied = self._occupied
        while occupied and occupied[0] < frontier:
            slot = occupied.popleft()
            members = self.grid.pop(slot, None)
            if members is None:
                continue
            self._singletons.discard(slot)
            for packet_id in members:
                # FIFO eviction reaches a packet's last replica slot last,
                # so this is the moment all of its copies are gone.
                if self.replicas[packet_id][-1] == slot:
                    self.n_lost += 1
                    if self.retain_history:
                        self.lost.add(packet_id)
                    else:
                        del self.replicas[packet_id]
                    if self.on_event is not None:
                        self.on_event(slot, packet_id, "lost", 0)

    def _forget_resolved(self) -> None:
        retired = self._retired
        while retired and retired[0][0] <= self.newest:
            _, packet_id = heapq.heappop(retired)
            self.decoded.discard(packet_id)


def sw_ingest(state: SwDecoder, slot: int, bursts: Iterable[tuple[int, tuple[int, ...]]]) -> set[int]:
    """Feed one slot into a sliding-window decoder state."""
    return state.ingest(slot, bursts)
