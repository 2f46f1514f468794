"""Arrival process and replica placement rules."""

import math

import numpy as np
import pytest

from alohasim.errors import ConfigurationError
from alohasim.traffic import (
    ReplicaPlacement,
    draw_arrival_counts,
    next_frame_start,
    place_fb,
    place_sw,
    sample_frame_slots,
    sample_window_slots,
)


class TestArrivals:
    def test_zero_load_means_no_arrivals(self):
        counts = draw_arrival_counts(0.0, 1000, np.random.default_rng(0))
        assert counts.shape == (1000,)
        assert counts.sum() == 0

    def test_negative_load_rejected(self):
        with pytest.raises(ValueError):
            draw_arrival_counts(-0.1, 10, np.random.default_rng(0))

    def test_negative_slot_count_rejected(self):
        with pytest.raises(ValueError):
            draw_arrival_counts(0.5, -1, np.random.default_rng(0))

    def test_mean_arrivals_match_load(self):
        rng = np.random.default_rng(42)
        counts = draw_arrival_counts(0.5, 1_000_000, rng)
        assert abs(counts.mean() - 0.5) < 0.002

    def test_empty_slot_fraction_at_unit_load(self):
        rng = np.random.default_rng(42)
        counts = draw_arrival_counts(1.0, 1_000_000, rng)
        zero_fraction = float(np.mean(counts == 0))
        assert abs(zero_fraction - math.exp(-1)) < 0.0015

    def test_deterministic_for_fixed_generator_seed(self):
        a = draw_arrival_counts(0.7, 5000, np.random.default_rng(9))
        b = draw_arrival_counts(0.7, 5000, np.random.default_rng(9))
        assert np.array_equal(a, b)


class TestFrameSchedule:
    def test_arrival_maps_to_next_frame(self):
        assert next_frame_start(0, 200) == 200
        assert next_frame_start(199, 200) == 200
        assert next_frame_start(200, 200) == 400
        assert next_frame_start(399, 200) == 400

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            next_frame_start(-1, 200)
        with pytest.raises(ValueError):
            next_frame_start(0, 0)


class TestFramePlacement:
    def test_full_degree_fills_the_frame(self):
        slots = sample_frame_slots(2, 10, 2, np.random.default_rng(0))
        assert slots == (10, 11)

    def test_slots_sorted_distinct_in_frame(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            slots = sample_frame_slots(3, 400, 200, rng)
            assert len(slots) == 3
            assert len(set(slots)) == 3
            assert list(slots) == sorted(slots)
            assert all(400 <= s < 600 for s in slots)

    def test_degree_larger_than_frame_rejected(self):
        with pytest.raises(ConfigurationError):
            sample_frame_slots(3, 0, 2, np.random.default_rng(0))

    def test_degree_below_one_rejected(self):
        with pytest.raises(ValueError):
            sample_frame_slots(0, 0, 200, np.random.default_rng(0))

    def test_single_copy_uniform_over_frame(self):
        rng = np.random.default_rng(123)
        n = 1_000_000
        frame_slots = 200
        hits = np.zeros(frame_slots, dtype=np.int64)
        for _ in range(n):
            (slot,) = sample_frame_slots(1, 0, frame_slots, rng)
            hits[slot] += 1
        expected = n / frame_slots
        sigma = math.sqrt(n * (1 / frame_slots) * (1 - 1 / frame_slots))
        assert np.all(np.abs(hits - expected) < 4 * sigma)

    def test_wrapper_builds_placement(self):
        placement = place_fb(17, 2, 200, 200, np.random.default_rng(5))
        assert isinstance(placement, ReplicaPlacement)
        assert placement.packet_id == 17
        assert placement.degree == 2
        assert all(200 <= s < 400 for s in placement.slots)


class TestWindowPlacement:
    def test_first_copy_right_after_ready_slot(self):
        assert sample_window_slots(1, 7, 200, np.random.default_rng(0)) == (8,)

    def test_full_degree_fills_the_window(self):
        assert sample_window_slots(2, 0, 2, np.random.default_rng(0)) == (1, 2)

    def test_slots_sorted_distinct_in_window(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            slots = sample_window_slots(3, 50, 200, rng)
            assert slots[0] == 51
            assert len(set(slots)) == 3
            assert list(slots) == sorted(slots)
            assert all(51 <= s <= 250 for s in slots)

    def test_degree_larger_than_window_rejected(self):
        with pytest.raises(ConfigurationError):
            sample_window_slots(3, 0, 2, np.random.default_rng(0))

    def test_extra_copies_uniform_over_remaining_window(self):
        rng = np.random.default_rng(2024)
        n = 1_000_000
        window = 200
        hits = np.zeros(window + 1, dtype=np.int64)
        for _ in range(n):
            slots = sample_window_slots(3, 0, window, rng)
            assert slots[0] == 1
            hits[slots[1]] += 1
            hits[slots[2]] += 1
        # the two extra copies form a uniform 2-subset of slots 2..window
        p = 2 / (window - 1)
        expected = n * p
        sigma = math.sqrt(n * p * (1 - p))
        assert hits[0] == 0 and hits[1] == 0
        assert np.all(np.abs(hits[2:] - expected) < 4 * sigma)

    def test_distinct_ready_slots_give_distinct_anchors(self):
        rng = np.random.default_rng(1)
        a = sample_window_slots(2, 10, 50, rng)
        b = sample_window_slots(2, 11, 50, rng)
        assert a[0] == 11
        assert b[0] == 12

    def test_wrapper_builds_placement(self):
        placement = place_sw(99, 3, 10, 100, np.random.default_rng(5))
        assert placement.packet_id == 99
        assert placement.slots[0] == 11
        assert placement.degree == 3


class TestOfferedPhysicalLoad:
    def test_replica_rate_is_mean_degree_times_load(self):
        from alohasim.degree import make_regular

        rng = np.random.default_rng(77)
        load, n_slots = 0.5, 100_000
        counts = draw_arrival_counts(load, n_slots, rng)
        degrees = make_regular(2).sample_degrees(rng.random(int(counts.sum())))
        total_bursts = int(degrees.sum())
        expected = n_slots * load * 2
        sigma = math.sqrt(n_slots * load * 4)  # compound arrivals, fixed degree 2
        assert abs(total_bursts - expected) < 3 * sigma
