"""Run statistics and link-level performance metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist


def snr_db_to_linear(snr_db: float) -> float:
    """Decibel to linear power ratio."""
    return 10.0 ** (snr_db / 10.0)


def throughput(load: float, plr: float) -> float:
    """Decoded packets per slot for offered ``load`` and packet loss ratio."""
    if load < 0:
        raise ValueError(f"offered load must be >= 0, got {load!r}")
    if not 0.0 <= plr <= 1.0:
        raise ValueError(f"packet loss ratio must lie in [0, 1], got {plr!r}")
    return load * (1.0 - plr)


def normalized_efficiency(
    throughput_value: float, load: float, mean_degree: float, snr_linear: float
) -> float:
    """Spectral efficiency relative to a single dedicated link.

    Replica transmission multiplies the physical channel load by
    ``mean_degree``, splitting the available power budget across
    ``mean_degree * load`` bursts per slot; the achievable rate shrinks
    accordingly.  The logarithm base cancels out.
    """
    if snr_linear <= 0:
        raise ValueError(f"linear snr must be > 0, got {snr_linear!r}")
    if load < 0:
        raise ValueError(f"offered load must be >= 0, got {load!r}")
    if mean_degree < 1:
        raise ValueError(f"mean degree must be >= 1, got {mean_degree!r}")
    if load == 0:
        return 0.0
    physical_load = mean_degree * load
    return throughput_value * (math.log1p(snr_linear / physical_load) / math.log1p(snr_linear))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes!r}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence!r}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class RunStats:
    """Aggregate outcome of one simulated operating point.

    Only packets whose transmission began after warm-up are counted, and
    the run is drained first, so ``packets_sent`` always splits exactly
    into decoded and lost.
    """

    offered_load: float
    measured_slots: int
    packets_sent: int
    packets_decoded: int
    packets_lost: int
    plr: float
    throughput: float
    plr_ci_low: float
    plr_ci_high: float
    mean_delay_slots: float

    def __post_init__(self) -> None:
        if min(self.packets_sent, self.packets_decoded, self.packets_lost) < 0:
            raise ValueError("packet counts must be >= 0")
        if self.packets_decoded + self.packets_lost != self.packets_sent:
            raise ValueError(
                f"{self.packets_decoded} decoded + {self.packets_lost} lost "
                f"!= {self.packets_sent} sent"
            )
        if not 0.0 <= self.plr <= 1.0:
            raise ValueError(f"packet loss ratio must lie in [0, 1], got {self.plr!r}")

    @classmethod
    def from_counts(
        cls,
        offered_load: float,
        measured_slots: int,
        packets_sent: int,
        packets_decoded: int,
        packets_lost: int,
        delay_sum: float,
        confidence: float = 0.95,
    ) -> "RunStats":
        plr = packets_lost / packets_sent if packets_sent else 0.0
        if packets_sent:
            ci_low, ci_high = wilson_interval(packets_lost, packets_sent, confidence)
        else:
            ci_low, ci_high = 0.0, 1.0  # vacuous: no trials observed
        mean_delay = delay_sum / packets_decoded if packets_decoded else 0.0
        return cls(
            offered_load=offered_load,
            measured_slots=measured_slots,
            packets_sent=packets_sent,
            packets_decoded=packets_decoded,
            packets_lost=packets_lost,
            plr=plr,
            throughput=throughput(offered_load, plr),
            plr_ci_low=ci_low,
            plr_ci_high=ci_high,
            mean_delay_slots=mean_delay,
        )


@dataclass(frozen=True)
class EfficiencyPoint:
    """Normalized efficiency of one operating point at one snr."""

    load: float
    snr_db: float
    mean_degree: float
    physical_load: float
    eta: float

    def __post_init__(self) -> None:
        if not -1e-9 <= self.eta <= 1.0 + 1e-9:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")

    @classmethod
    def from_throughput(
        cls, throughput_value: float, load: float, mean_degree: float, snr_db: float
    ) -> "EfficiencyPoint":
        eta = normalized_efficiency(throughput_value, load, mean_degree, snr_db_to_linear(snr_db))
        return cls(
            load=load,
            snr_db=snr_db,
            mean_degree=mean_degree,
            physical_load=mean_degree * load,
            eta=eta,
        )
