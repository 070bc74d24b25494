"""Command-line front-end: plan, compare, derive, simulate, validate.

The pipeline mirrors how the toolkit is meant to be used end to end:
load and validate a scenario, optimize the formation-centroid path,
derive the per-UAV paths, replay them in the tracking simulator, and
export everything as headered CSV / GeoJSON for plotting.

Exit codes: 0 success, 1 internal error, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cost import evaluate
from .environment import ScenarioError, load_scenario, scenario_fingerprint, scenario_warnings
from .fileio import (
    FileFormatError,
    fmt,
    provenance_header,
    read_path_csv,
    weights_label,
    write_convergence_csv,
    write_csv,
    write_error_csv,
    write_geojson,
    write_json,
    write_path_csv,
    write_traces_csv,
)
from .formation import FormationSpec, derive_paths
from .geometry import Point3
from .optimizer import PsoConfig, compare, run
from .simtrack import SimConfig, path_error, simulate

# Published comparison figures for context when printing comparison
# tables. These were measured on a different, unpublished obstacle
# instance and are not directly comparable to the bundled benchmark.
PUBLISHED_REFERENCE = {
    "classic": (112.43, 143.0, 102),
    "theta": (111.02, 142.84, 68),
}


class CliInputError(Exception):
    """Bad user input that is not already a ScenarioError/FileFormatError."""


@dataclass
class OutputBundle:
    """Artifacts a command produced plus the provenance header they carry.

    Every file listed here starts with the same '# key=value' header
    (scenario hash, seed, variant, weights).
    """

    header: dict
    files: tuple[Path, ...] = ()
    report: object = None          # RunReport from 'plan'
    comparison: object = None      # ComparisonResult from 'compare'
    uav_paths: tuple = ()          # CandidatePath per UAV from 'derive'
    error_series: tuple = ()       # ErrorSeries per UAV from 'simulate'


LAST_BUNDLE: OutputBundle | None = None


def _finish(bundle: OutputBundle) -> int:
    # kept for introspection from tests and interactive use
    global LAST_BUNDLE
    LAST_BUNDLE = bundle
    return 0


def _add_pso_overrides(parser, include_seed=True, include_variant=True):
    group = parser.add_argument_group("swarm overrides (flags > file > defaults)")
    if include_seed:
        group.add_argument("--seed", type=int, help="random seed")
    if include_variant:
        group.add_argument("--variant", choices=["theta", "classic"],
                           help="optimizer variant")
    group.add_argument("--swarm-size", type=int, dest="swarm_size")
    group.add_argument("--free-waypoints", type=int, dest="free_waypoints")
    group.add_argument("--iterations", type=int)
    group.add_argument("--inertia", type=float)
    group.add_argument("--c1", type=float)
    group.add_argument("--c2", type=float)
    group.add_argument("--convergence-window", type=int, dest="convergence_window")
    group.add_argument("--convergence-epsilon", type=float,
                       dest="convergence_epsilon")


def _apply_overrides(config: PsoConfig, args) -> PsoConfig:
    fields_ = ("seed", "variant", "swarm_size", "free_waypoints", "iterations",
               "inertia", "c1", "c2", "convergence_window", "convergence_epsilon")
    overrides = {
        name: getattr(args, name)
        for name in fields_
        if getattr(args, name, None) is not None
    }
    return replace(config, **overrides) if overrides else config


def _load(path_str: str):
    path = Path(path_str)
    if not path.exists():
        raise CliInputError(f"scenario file not found: {path}")
    return load_scenario(path)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_plan(args) -> int:
    scenario = _load(args.scenario)
    config = _apply_overrides(scenario.pso, args)
    report = run(scenario, config)
    fingerprint = scenario_fingerprint(scenario)
    header = provenance_header(fingerprint, config.seed, config.variant,
                               scenario.weights)
    out = _out_dir(args)
    stem = args.stem or Path(args.scenario).stem
    path_file = out / f"{stem}_path.csv"
    conv_file = out / f"{stem}_convergence.csv"
    geo_file = out / f"{stem}_path.geojson"
    meta_file = out / f"{stem}_run.json"

    write_path_csv(path_file, report.best_path, header)
    write_convergence_csv(conv_file, report.trace, header)
    write_geojson(geo_file, report.best_path, dict(header))
    write_json(meta_file, {
        "scenario_sha256": fingerprint,
        "scenario_file": str(args.scenario),
        "config": vars(config) | {},
        "best_cost": vars(report.best_cost) | {},
        "convergence_iteration": report.convergence_iteration,
        "convergence_criterion": {
            "window": config.convergence_window,
            "epsilon": config.convergence_epsilon,
        },
        "warnings": list(report.warnings),
        "wall_time_s": report.wall_time_s,
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    })

    best = report.best_cost
    print(f"best total={fmt(best.total)} j1={fmt(best.j1)} "
          f"j2={fmt(best.j2)} j3={fmt(best.j3)}")
    print(f"iterations to convergence: {report.convergence_iteration}")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for f in (path_file, conv_file, geo_file, meta_file):
        print(f"wrote {f}")
    return _finish(OutputBundle(header=header, report=report,
                                files=(path_file, conv_file, geo_file, meta_file)))


def cmd_compare(args) -> int:
    scenario = _load(args.scenario)
    config = _apply_overrides(scenario.pso, args)
    result = compare(scenario, args.runs, args.base_seed, config)
    fingerprint = scenario_fingerprint(scenario)
    header = provenance_header(fingerprint, f"{args.base_seed}..{args.base_seed + args.runs - 1}",
                               "both", scenario.weights)
    out = _out_dir(args)
    stem = args.stem or Path(args.scenario).stem
    table_file = out / f"{stem}_comparison.csv"
    columns = ["variant", "runs", "base_seed", "min_cost", "max_cost",
               "median_cost", "median_convergence_iteration"]
    write_csv(table_file, header, columns, [
        (s.variant, s.runs, s.base_seed, s.min_cost, s.max_cost,
         s.median_cost, fmt(s.median_convergence_iteration))
        for s in result.summaries
    ])

    print(f"{'variant':10s} {'runs':>4s} {'min cost':>12s} {'max cost':>12s} "
          f"{'median cost':>12s} {'median iters':>12s}")
    for s in result.summaries:
        print(f"{s.variant:10s} {s.runs:4d} {s.min_cost:12.2f} {s.max_cost:12.2f} "
              f"{s.median_cost:12.2f} {s.median_convergence_iteration:12.1f}")
    print("reference (published values, different obstacle instance, "
          "not directly comparable):")
    for variant, (lo, hi, iters) in PUBLISHED_REFERENCE.items():
        print(f"{variant:10s} {'-':>4s} {lo:12.2f} {hi:12.2f} {'-':>12s} {iters:12d}")
    print(f"wrote {table_file}")
    return _finish(OutputBundle(header=header, comparison=result,
                                files=(table_file,)))


def _audit_spec(scenario) -> FormationSpec:
    # single-UAV audit: same rotor radius, zero formation radius
    return FormationSpec(offsets=(Point3(0.0, 0.0, 0.0),),
                         quad_radius=scenario.formation.quad_radius)


def cmd_derive(args) -> int:
    scenario = _load(args.scenario)
    centroid_path, in_header = read_path_csv(args.path_csv)
    if (centroid_path.start != scenario.start
            or centroid_path.target != scenario.target):
        raise CliInputError(
            f"{args.path_csv}: endpoints do not match the scenario start/target"
        )
    uav_paths = derive_paths(centroid_path, scenario.formation)
    fingerprint = scenario_fingerprint(scenario)
    header = provenance_header(fingerprint, in_header.get("seed", "-"),
                               in_header.get("variant", "-"), scenario.weights)
    out = _out_dir(args)
    stem = Path(args.path_csv).stem
    written = []
    for n, uav_path in enumerate(uav_paths, start=1):
        f = out / f"{stem}_uav{n}.csv"
        write_path_csv(f, uav_path, header | {"uav": str(n)})
        written.append(f)
        print(f"wrote {f}")
    if args.audit:
        from .cost import violation_cost
        audit_formation = _audit_spec(scenario)
        for n, uav_path in enumerate(uav_paths, start=1):
            j2 = violation_cost(uav_path, scenario.obstacles, audit_formation)
            print(f"uav{n} violation audit (formation radius 0): j2={fmt(j2)}")
    return _finish(OutputBundle(header=header, uav_paths=tuple(uav_paths),
                                files=tuple(written)))


def cmd_simulate(args) -> int:
    planned = []
    headers = []
    for csv_file in args.path_csv:
        p, h = read_path_csv(csv_file)
        planned.append(p)
        headers.append(h)
    config = SimConfig(speed=args.speed, timestep=args.timestep,
                       noise_sigma=args.noise_sigma, seed=args.seed)
    traces = simulate(planned, config)
    series = [path_error(p, t) for p, t in zip(planned, traces)]

    header = {
        "scenario_sha256": headers[0].get("scenario_sha256", "-"),
        "seed": str(args.seed),
        "variant": headers[0].get("variant", "-"),
        "weights": headers[0].get("weights", "-"),
        "speed_mps": fmt(args.speed),
        "timestep_s": fmt(args.timestep),
        "noise_sigma_m": fmt(args.noise_sigma),
    }
    out = _out_dir(args)
    stem = args.stem or Path(args.path_csv[0]).stem
    traces_file = out / f"{stem}_traces.csv"
    errors_file = out / f"{stem}_errors.csv"
    write_traces_csv(traces_file, traces, header)
    write_error_csv(errors_file, series, header)
    for n, s in enumerate(series, start=1):
        print(f"uav{n}: max error {fmt(s.max_error)} m, "
              f"mean error {fmt(s.mean_error)} m")
    print(f"wrote {traces_file}")
    print(f"wrote {errors_file}")
    return _finish(OutputBundle(header=header, error_series=tuple(series),
                                files=(traces_file, errors_file)))


def cmd_validate(args) -> int:
    scenario = _load(args.scenario)
    print(f"scenario ok: {args.scenario}")
    print(f"  sha256: {scenario_fingerprint(scenario)}")
    ext = scenario.operation_space.extent
    print(f"  operation space: {fmt(ext.x)} x {fmt(ext.y)} x {fmt(ext.z)} m")
    print(f"  obstacles: {len(scenario.obstacles)}")
    print(f"  uavs: {scenario.formation.uav_count} "
          f"(formation radius {fmt(scenario.formation.formation_radius)} m)")
    print(f"  altitude band: [{fmt(scenario.z_min)}, {fmt(scenario.z_max)}] m")
    print(f"  weights: {weights_label(scenario.weights)}")
    for warning in scenario_warnings(scenario):
        print(f"  warning: {warning}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmpath",
        description="Multi-UAV formation path planning with angle-encoded "
                    "particle swarm optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="optimize the formation centroid path")
    p.add_argument("scenario", help="scenario YAML file")
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--stem", help="output file stem (default: scenario stem)")
    _add_pso_overrides(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="benchmark classic PSO against theta-PSO")
    p.add_argument("scenario")
    p.add_argument("--runs", type=int, default=20, help="seeded runs per variant")
    p.add_argument("--base-seed", type=int, default=1, dest="base_seed")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--stem")
    _add_pso_overrides(p, include_seed=False, include_variant=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("derive", help="derive per-UAV paths from a centroid path")
    p.add_argument("path_csv", help="centroid path CSV from 'plan'")
    p.add_argument("scenario")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--audit", action="store_true",
                   help="re-check each UAV path against the obstacles "
                        "with formation radius 0")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("simulate", help="replay planned paths with the "
                                        "kinematic follower")
    p.add_argument("path_csv", nargs="+", help="one or more path CSV files")
    p.add_argument("--speed", type=float, default=2.0, help="m/s")
    p.add_argument("--timestep", type=float, default=0.1, help="s")
    p.add_argument("--noise-sigma", type=float, default=0.0, dest="noise_sigma",
                   help="per-axis position noise sigma, m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--stem")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="lint a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioError, FileFormatError, CliInputError, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
