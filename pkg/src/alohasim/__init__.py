"""Slotted random-access simulator with iterative interference cancellation.

Three schemes share one engine: classic single-copy slotted access, framed
replica transmission decoded frame by frame, and sliding-window replica
transmission decoded on the fly from a bounded buffer.  The package also
evaluates average-power-constrained normalized efficiency and the stability
of a retransmission channel driven by a measured throughput curve.
"""

from .decoder import SlotGrid, SwDecoder, fb_decode, oracle_peel, peel, sw_ingest
from .degree import (
    IRSA8,
    PRESETS,
    DegreeDistribution,
    make_regular,
    parse_distribution,
)
from .engine import (
    SCHEME_FB,
    SCHEME_SA,
    SCHEME_SW,
    ExperimentConfig,
    PointResult,
    point_seed,
    run_point,
    sweep,
)
from .errors import ConfigurationError, CoverageError, InputDataError
from .metrics import (
    EfficiencyPoint,
    RunStats,
    normalized_efficiency,
    snr_db_to_linear,
    throughput,
    wilson_interval,
)
from .stability import (
    ContourPoint,
    EquilibriumPoint,
    PopulationModel,
    ThroughputCurve,
    classify_equilibrium,
    equilibrium_contour,
    find_equilibria,
    global_stability,
    offered_loads,
)
from .traffic import (
    PacketArrival,
    ReplicaPlacement,
    draw_arrival_counts,
    next_frame_start,
    place_fb,
    place_sw,
    sample_frame_slots,
    sample_window_slots,
)

__version__ = "0.1.0"

__all__ = [
    "IRSA8",
    "PRESETS",
    "SCHEME_FB",
    "SCHEME_SA",
    "SCHEME_SW",
    "ConfigurationError",
    "ContourPoint",
    "CoverageError",
    "DegreeDistribution",
    "EfficiencyPoint",
    "EquilibriumPoint",
    "ExperimentConfig",
    "InputDataError",
    "PacketArrival",
    "PointResult",
    "PopulationModel",
    "ReplicaPlacement",
    "RunStats",
    "SlotGrid",
    "SwDecoder",
    "ThroughputCurve",
    "classify_equilibrium",
    "draw_arrival_counts",
    "equilibrium_contour",
    "fb_decode",
    "find_equilibria",
    "global_stability",
    "make_regular",
    "next_frame_start",
    "normalized_efficiency",
    "offered_loads",
    "oracle_peel",
    "parse_distribution",
    "peel",
    "place_fb",
    "place_sw",
    "point_seed",
    "run_point",
    "sample_frame_slots",
    "sample_window_slots",
    "snr_db_to_linear",
    "sweep",
    "sw_ingest",
    "throughput",
    "wilson_interval",
    "__version__",
]
