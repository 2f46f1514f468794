"""Command-line front end: run sweeps, emit CSV, drive stability analysis."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from datetime import datetime, timezone

from .degree import DegreeDistribution, make_regular, parse_distribution
from .engine import (
    SCHEME_FB,
    SCHEME_SA,
    SCHEME_SW,
    ExperimentConfig,
    PointResult,
    sweep,
)
from .errors import ConfigurationError, InputDataError
from .metrics import EfficiencyPoint
from .stability import (
    PopulationModel,
    ThroughputCurve,
    equilibrium_contour,
    find_equilibria,
    global_stability,
)

RESULT_HEADER = (
    "scheme,dist,G,snr_db,slots,sent,decoded,lost,plr,plr_ci_low,plr_ci_high,"
    "throughput,mean_degree,D,eta,mean_delay_slots,seed"
)
STABILITY_HEADER = "n_b,g_tx,g_retx,g_total,throughput,kind,globally_stable"

OUTPUT_DIR_ENV = "ALOHASIM_OUT"

_SCHEME_ALIASES = {
    "sa": SCHEME_SA,
    "fb": SCHEME_FB,
    "fb_crdsa": SCHEME_FB,
    "sw": SCHEME_SW,
    "sw_crdsa": SCHEME_SW,
}

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_INPUT = 4

FIGURE_GRID = "0.1:1.2:0.05"
CONTOUR_GRID = "0:2:0.1"
FIGURE_DISTS = ("x^2", "x^3", "irsa8")
# Population model behind the canned equilibrium-contour figure: fresh load
# M*p_tx = 0.55 sits just above the sliding-window x^2 capacity, yielding the
# classic bistable pattern (two sinks separated by a source).
CONTOUR_MODEL = (100, 0.0055, 0.02)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse ``start:stop:step`` (endpoints inclusive) or a comma list."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise ValueError("step must be positive")
            if stop < start:
                raise ValueError("stop must be >= start")
            values = []
            i = 0
            while True:
                value = start + i * step
                if value > stop + step / 2:
                    break
                values.append(round(value, 12))
                i += 1
            return tuple(values)
        return tuple(round(float(p), 12) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}: {exc}") from exc


def _parse_dist_arg(text: str) -> DegreeDistribution:
    try:
        return parse_distribution(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_run_flags(parser: argparse.ArgumentParser, *, needs_scheme: bool) -> None:
    if needs_scheme:
        parser.add_argument(
            "--scheme", required=True, choices=sorted(_SCHEME_ALIASES), help="access scheme"
        )
        parser.add_argument(
            "--dist",
            type=_parse_dist_arg,
            default=None,
            help='degree distribution, e.g. "x^2", "0.5x^2+0.5x^3", or a preset name',
        )
        parser.add_argument("--g", type=parse_grid, required=True, help="load grid start:stop:step or comma list")
    else:
        parser.add_argument("--g", type=parse_grid, default=None, help="override the canned load grid")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--slots", type=int, default=200_000, help="simulated slots per point")
    parser.add_argument("--warmup", type=int, default=None, help="warm-up slots to discard")
    parser.add_argument("--window", type=int, default=200, help="frame / window length in slots")
    parser.add_argument("--max-iter", type=int, default=50, help="decoder iteration budget")
    parser.add_argument(
        "--memory-multiplier", type=int, default=5, help="receiver buffer size in windows"
    )
    parser.add_argument("--confidence", type=float, default=0.95, help="interval confidence level")
    parser.add_argument("--threads", type=int, default=1, help="sweep workers (0 = one per CPU)")
    parser.add_argument("-o", "--output", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Slotted random-access simulator with interference cancellation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name, blurb in (
        ("throughput", "sweep offered load and report throughput"),
        ("plr", "sweep offered load and report packet loss"),
        ("efficiency", "sweep offered load and report normalized efficiency"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_run_flags(p, needs_scheme=True)
        if name == "efficiency":
            p.add_argument(
                "--snr-db",
                type=parse_float_list,
                required=True,
                help="signal-to-noise ratios in dB, comma separated",
            )

    p = sub.add_parser("stability", help="equilibrium analysis over a measured throughput curve")
    p.add_argument("--curve", required=True, help="throughput CSV to analyse")
    p.add_argument("--population", type=int, required=True, help="user population size")
    p.add_argument("--p-tx", type=float, required=True, help="fresh transmission probability")
    p.add_argument("--p-retx", type=float, required=True, help="backlogged retry probability")
    p.add_argument("--scheme", default=None, choices=sorted(_SCHEME_ALIASES), help="filter curve rows")
    p.add_argument("--dist", default=None, help="filter curve rows by distribution label")
    p.add_argument("--grid-points", type=int, default=2001, help="equilibrium scan resolution")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("figures", help="run the canned experiment set (fig2.csv ... fig7.csv)")
    _add_run_flags(p, needs_scheme=False)

    return parser


def _echo_config(label: str, pairs: list[tuple[str, object]]) -> None:
    body = " ".join(f"{key}={value}" for key, value in pairs)
    print(f"config[{label}]: {body}", file=sys.stderr)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _timestamp_line() -> str:
    return f"# generated {datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')}"


def result_rows(results: list[PointResult], snr_dbs: tuple[float, ...] | None) -> list[str]:
    rows = []
    for point in results:
        stats = point.stats
        base = [
            point.scheme,
            point.dist_label,
            _fmt(point.load),
        ]
        tail = [
            str(stats.measured_slots),
            str(stats.packets_sent),
            str(stats.packets_decoded),
            str(stats.packets_lost),
            _fmt(stats.plr),
            _fmt(stats.plr_ci_low),
            _fmt(stats.plr_ci_high),
            _fmt(stats.throughput),
            _fmt(point.mean_degree),
            _fmt(point.mean_degree * point.load),
        ]
        delay = _fmt(stats.mean_delay_slots)
        if snr_dbs is None:
            rows.append(",".join(base + [""] + tail + ["", delay, str(point.seed)]))
            continue
        for snr_db in snr_dbs:
            eta = EfficiencyPoint.from_throughput(
                stats.throughput, point.load, point.mean_degree, snr_db
            ).eta
            rows.append(
                ",".join(base + [_fmt(snr_db)] + tail + [_fmt(eta), delay, str(point.seed)])
            )
    return rows


def _result_csv(rows: list[str]) -> str:
    return "\n".join([_timestamp_line(), RESULT_HEADER, *rows]) + "\n"


def _resolve_config(args: argparse.Namespace, scheme: str, dist: DegreeDistribution | None,
                    loads: tuple[float, ...]) -> ExperimentConfig:
    if scheme == SCHEME_SA:
        dist = make_regular(1)
    elif dist is None:
        dist = make_regular(2)
    return ExperimentConfig(
        scheme=scheme,
        distribution=dist,
        loads=loads,
        window_slots=args.window,
        max_iterations=args.max_iter,
        memory_multiplier=args.memory_multiplier,
        total_slots=args.slots,
        warmup_slots=args.warmup,
        seed=args.seed,
        confidence=args.confidence,
    )


def _echo_run(config: ExperimentConfig, args: argparse.Namespace, label: str,
              snr_dbs: tuple[float, ...] | None) -> None:
    pairs: list[tuple[str, object]] = [
        ("scheme", config.scheme),
        ("dist", config.distribution.label),
        ("g", ",".join(_fmt(g) for g in config.loads)),
    ]
    if snr_dbs is not None:
        pairs.append(("snr_db", ",".join(_fmt(s) for s in snr_dbs)))
    pairs += [
        ("window", config.window_slots),
        ("max_iter", config.max_iterations),
        ("memory_multiplier", config.memory_multiplier),
        ("slots", config.total_slots),
        ("warmup", config.warmup_slots),
        ("seed", config.seed),
        ("confidence", config.confidence),
        ("threads", args.threads),
    ]
    _echo_config(label, pairs)


def _cmd_sweep(args: argparse.Namespace) -> int:
    parser_scheme = _SCHEME_ALIASES[args.scheme]
    if parser_scheme == SCHEME_SA and args.dist is not None and args.dist.terms != ((1, 1.0),):
        raise ConfigurationError(
            "the single-copy scheme always transmits one replica; drop --dist or pass x"
        )
    snr_dbs = getattr(args, "snr_db", None)
    config = _resolve_config(args, parser_scheme, args.dist, args.g)
    _echo_run(config, args, args.subcommand, snr_dbs)
    results = sweep(config, workers=args.threads)
    _write_text(args.output, _result_csv(result_rows(results, snr_dbs)))
    return EXIT_OK


def _load_curve_csv(path: str, scheme: str | None, dist: str | None) -> ThroughputCurve:
    try:
        with open(path, newline="") as handle:
            lines = [line.rstrip("\n") for line in handle]
    except OSError as exc:
        raise InputDataError(f"cannot read curve file {path!r}: {exc}") from exc
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise InputDataError(f"curve file {path!r} is empty")
    header = lines[0].split(",")
    try:
        g_col = header.index("G")
        t_col = header.index("throughput")
        scheme_col = header.index("scheme")
        dist_col = header.index("dist")
    except ValueError as exc:
        raise InputDataError(f"curve file {path!r} lacks a required column: {exc}") from exc
    samples: dict[float, float] = {}
    groups = set()
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise InputDataError(f"{path}:{number}: expected {len(header)} fields")
        if scheme is not None and fields[scheme_col] != scheme:
            continue
        if dist is not None and fields[dist_col] != dist:
            continue
        groups.add((fields[scheme_col], fields[dist_col]))
        try:
            load = float(fields[g_col])
            throughput = float(fields[t_col])
        except ValueError as exc:
            raise InputDataError(f"{path}:{number}: bad number: {exc}") from exc
        if load in samples and samples[load] != throughput:
            raise InputDataError(
                f"{path}:{number}: conflicting throughput values at load {load:g}"
            )
        samples[load] = throughput
    if len(groups) > 1:
        named = ", ".join(f"{s}({d})" for s, d in sorted(groups))
        raise InputDataError(
            f"curve file {path!r} mixes several series ({named}); "
            "filter with --scheme/--dist"
        )
    if not samples:
        raise InputDataError(f"curve file {path!r} has no usable rows")
    return ThroughputCurve.from_samples(samples.items())


def _stability_rows(model: PopulationModel, curve: ThroughputCurve,
                    grid_points: int) -> list[str]:
    points = find_equilibria(model, curve, grid_points=grid_points)
    stable = global_stability(points)
    flag = "true" if stable else "false"
    step = max(1, model.population // 200)
    backlogs = list(range(0, model.population + 1, step))
    if backlogs[-1] != model.population:
        backlogs.append(model.population)
    rows = []
    for c in equilibrium_contour(model, curve, backlogs):
        rows.append(
            ",".join(
                [
                    _fmt(c.n_backlogged),
                    _fmt(c.g_tx),
                    _fmt(c.g_retx),
                    _fmt(c.g_total),
                    _fmt(c.throughput),
                    "",
                    flag,
                ]
            )
        )
    for p in points:
        kind = "tangent" if p.tangent else p.kind
        rows.append(
            ",".join(
                [
                    _fmt(p.n_backlogged),
                    _fmt(p.g_tx),
                    _fmt(p.g_retx),
                    _fmt(p.g_total),
                    _fmt(p.throughput),
                    kind,
                    flag,
                ]
            )
        )
    return rows


def _cmd_stability(args: argparse.Namespace) -> int:
    scheme = _SCHEME_ALIASES[args.scheme] if args.scheme else None
    curve = _load_curve_csv(args.curve, scheme, args.dist)
    model = PopulationModel(args.population, args.p_tx, args.p_retx)
    _echo_config(
        "stability",
        [
            ("curve", args.curve),
            ("population", model.population),
            ("p_tx", model.p_tx),
            ("p_retx", model.p_retx),
            ("grid_points", args.grid_points),
        ],
    )
    rows = _stability_rows(model, curve, args.grid_points)
    text = "\n".join([_timestamp_line(), STABILITY_HEADER, *rows]) + "\n"
    _write_text(args.output, text)
    return EXIT_OK


def _figure_configs(args: argparse.Namespace) -> dict[str, ExperimentConfig]:
    grid = args.g if args.g is not None else parse_grid(FIGURE_GRID)
    combos: dict[str, ExperimentConfig] = {}
    combos["SA"] = _resolve_config(args, SCHEME_SA, None, grid)
    for scheme in (SCHEME_FB, SCHEME_SW):
        for label in FIGURE_DISTS:
            dist = parse_distribution(label)
            combos[f"{scheme}({label})"] = _resolve_config(args, scheme, dist, grid)
    return combos


def _cmd_figures(args: argparse.Namespace) -> int:
    out_dir = args.output or os.environ.get(OUTPUT_DIR_ENV) or "."
    os.makedirs(out_dir, exist_ok=True)
    combos = _figure_configs(args)
    results: dict[str, list[PointResult]] = {}
    for name, config in combos.items():
        _echo_run(config, args, f"figures/{name}", None)
        results[name] = sweep(config, workers=args.threads)

    comparison = [r for name, rs in results.items() if name != "SA" for r in rs]
    everything = results["SA"] + comparison

    def emit(name: str, rows: list[str], header: str = RESULT_HEADER) -> None:
        path = os.path.join(out_dir, name)
        _write_text(path, "\n".join([_timestamp_line(), header, *rows]) + "\n")
        print(f"wrote {path}", file=sys.stderr)

    emit("fig2.csv", result_rows(comparison, None))
    emit("fig3.csv", result_rows(comparison, None))
    emit("fig4.csv", result_rows(everything, (0.0,)))
    emit("fig5.csv", result_rows(everything, (6.0,)))
    emit("fig6.csv", result_rows(everything, (12.0, 18.0)))

    contour_grid = args.g if args.g is not None else parse_grid(CONTOUR_GRID)
    curve_config = _resolve_config(args, SCHEME_SW, parse_distribution("x^2"), contour_grid)
    _echo_run(curve_config, args, "figures/contour-curve", None)
    curve_results = sweep(curve_config, workers=args.threads)
    curve = ThroughputCurve.from_samples(
        (p.load, p.stats.throughput) for p in curve_results
    )
    model = PopulationModel(*CONTOUR_MODEL)
    emit("fig7.csv", _stability_rows(model, curve, 2001), header=STABILITY_HEADER)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "stability":
            return _cmd_stability(args)
        if args.subcommand == "figures":
            return _cmd_figures(args)
        return _cmd_sweep(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
