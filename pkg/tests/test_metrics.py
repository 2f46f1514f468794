"""Throughput, normalized efficiency, confidence intervals, run statistics."""

import math

import pytest

from alohasim.metrics import (
    EfficiencyPoint,
    RunStats,
    normalized_efficiency,
    snr_db_to_linear,
    throughput,
    wilson_interval,
)


class TestThroughput:
    def test_known_values(self):
        assert throughput(0.5, 0.0) == 0.5
        assert throughput(0.8, 1.0) == 0.0
        assert throughput(1.0, 1 - math.exp(-1)) == pytest.approx(math.exp(-1), abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            throughput(-0.1, 0.0)
        with pytest.raises(ValueError):
            throughput(0.5, -0.01)
        with pytest.raises(ValueError):
            throughput(0.5, 1.01)


class TestSnrConversion:
    def test_reference_points(self):
        assert snr_db_to_linear(0.0) == 1.0
        assert snr_db_to_linear(10.0) == pytest.approx(10.0, rel=1e-12)
        assert snr_db_to_linear(6.0) == pytest.approx(3.9810717, abs=1e-6)
        assert snr_db_to_linear(-10.0) == pytest.approx(0.1, rel=1e-12)


class TestNormalizedEfficiency:
    def test_unit_physical_load_identity(self):
        # mean_degree * load == 1 leaves the rate expression untouched
        for t, snr in ((0.25, 1.0), (0.3663, 3.981), (0.9, 15.8)):
            assert normalized_efficiency(t, 0.5, 2.0, snr) == t
            assert normalized_efficiency(t, 1.0, 1.0, snr) == t

    def test_reference_value(self):
        eta = normalized_efficiency(0.5, 1.0, 2.0, 1.0)
        assert eta == pytest.approx(0.5 * math.log(1.5) / math.log(2.0), rel=1e-12)
        assert eta == pytest.approx(0.2925, abs=1e-4)

    def test_zero_load_or_zero_throughput(self):
        assert normalized_efficiency(0.0, 0.0, 2.0, 1.0) == 0.0
        assert normalized_efficiency(0.0, 0.5, 2.0, 1.0) == 0.0

    def test_monotone_decreasing_in_mean_degree(self):
        etas = [normalized_efficiency(0.5, 0.6, mu, 3.981) for mu in (1.0, 2.0, 3.0, 3.6, 8.0)]
        assert all(a > b for a, b in zip(etas, etas[1:]))

    def test_log_base_cancels(self):
        t, load, mu, snr = 0.42, 0.7, 2.5, 7.3
        eta = normalized_efficiency(t, load, mu, snr)
        via_log10 = t * math.log10(1 + snr / (mu * load)) / math.log10(1 + snr)
        assert eta == pytest.approx(via_log10, rel=1e-12)

    def test_replicas_trade_rate_for_load(self):
        # spreading power over more copies can only lower efficiency
        t, load, snr = 0.5, 0.8, 3.981
        assert normalized_efficiency(t, load, 2.0, snr) < t * math.log1p(snr / load) / math.log1p(snr)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            normalized_efficiency(0.5, 0.5, 2.0, 0.0)
        with pytest.raises(ValueError):
            normalized_efficiency(0.5, 0.5, 2.0, -1.0)
        with pytest.raises(ValueError):
            normalized_efficiency(0.5, -0.5, 2.0, 1.0)
        with pytest.raises(ValueError):
            normalized_efficiency(0.5, 0.5, 0.5, 1.0)


class TestWilsonInterval:
    def test_boundary_counts(self):
        low, high = wilson_interval(0, 100)
        assert low == 0.0
        assert 0.0 < high < 0.06
        low, high = wilson_interval(100, 100)
        assert high == 1.0
        assert 0.94 < low < 1.0

    def test_reference_interval(self):
        low, high = wilson_interval(50, 100, 0.95)
        assert low == pytest.approx(0.4038, abs=5e-4)
        assert high == pytest.approx(0.5962, abs=5e-4)

    def test_interval_contains_point_estimate(self):
        for successes, trials in ((3, 10), (17, 1000), (999, 1000)):
            low, high = wilson_interval(successes, trials)
            assert low <= successes / trials <= high

    def test_wider_for_higher_confidence(self):
        narrow = wilson_interval(20, 200, 0.90)
        wide = wilson_interval(20, 200, 0.99)
        assert wide[0] < narrow[0] < narrow[1] < wide[1]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            wilson_interval(1, 0)
        with pytest.raises(ValueError):
            wilson_interval(-1, 10)
        with pytest.raises(ValueError):
            wilson_interval(11, 10)
        with pytest.raises(ValueError):
            wilson_interval(5, 10, 1.0)


class TestRunStats:
    def test_from_counts_consistency(self):
        stats = RunStats.from_counts(0.5, 10_000, 5000, 4900, 100, delay_sum=49_000.0)
        assert stats.plr == pytest.approx(0.02)
        assert stats.throughput == pytest.approx(0.5 * 0.98)
        assert stats.mean_delay_slots == pytest.approx(10.0)
        assert stats.plr_ci_low <= stats.plr <= stats.plr_ci_high

    def test_zero_traffic_run(self):
        stats = RunStats.from_counts(0.0, 10_000, 0, 0, 0, delay_sum=0.0)
        assert stats.plr == 0.0
        assert stats.throughput == 0.0
        assert stats.mean_delay_slots == 0.0
        assert (stats.plr_ci_low, stats.plr_ci_high) == (0.0, 1.0)

    def test_conservation_enforced(self):
        with pytest.raises(ValueError):
            RunStats(
                offered_load=0.5,
                measured_slots=100,
                packets_sent=10,
                packets_decoded=8,
                packets_lost=1,
                plr=0.1,
                throughput=0.45,
                plr_ci_low=0.0,
                plr_ci_high=0.3,
                mean_delay_slots=5.0,
            )

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            RunStats.from_counts(0.5, 100, -1, -1, 0, delay_sum=0.0)


class TestEfficiencyPoint:
    def test_from_throughput_fields(self):
        point = EfficiencyPoint.from_throughput(0.3663, 1.0, 1.0, snr_db=0.0)
        assert point.physical_load == 1.0
        assert point.eta == pytest.approx(0.3663, rel=1e-12)
        assert point.snr_db == 0.0

    def test_eta_range_enforced(self):
        with pytest.raises(ValueError):
            EfficiencyPoint(load=0.5, snr_db=0.0, mean_degree=1.0, physical_load=0.5, eta=1.5)
        with pytest.raises(ValueError):
            EfficiencyPoint(load=0.5, snr_db=0.0, mean_degree=1.0, physical_load=0.5, eta=-0.5)
