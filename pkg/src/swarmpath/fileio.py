"""CSV, GeoJSON and JSON writers/readers for planner artifacts.

Numeric CSV columns carry 9 significant digits. Every data file starts
with '# key=value' comment lines recording provenance (scenario hash,
seed, variant, weights), so any file can be traced back to the exact
inputs that produced it. Writers are deterministic: identical inputs
give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .cost import CandidatePath
from .geometry import Point3


class FileFormatError(ValueError):
    """A data file violates the expected layout; message carries file:row."""


def fmt(value) -> str:
    return format(float(value), ".9g")


def weights_label(weights) -> str:
    return f"{fmt(weights.length)},{fmt(weights.violation)},{fmt(weights.altitude)}"


def provenance_header(scenario_sha256: str, seed, variant: str, weights) -> dict:
    return {
        "scenario_sha256": scenario_sha256,
        "seed": str(seed),
        "variant": variant,
        "weights": weights if isinstance(weights, str) else weights_label(weights),
    }


def write_csv(path, header: dict, columns, rows) -> None:
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else
            str(cell) if isinstance(cell, int) else fmt(cell)
            for cell in row
        ))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path):
    """Returns (header dict, column names, data rows as string lists)."""
    header: dict[str, str] = {}
    columns = None
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if columns is None:
            columns = cells
            continue
        if len(cells) != len(columns):
            raise FileFormatError(
                f"{path}:{lineno}: expected {len(columns)} fields, got {len(cells)}"
            )
        rows.append((lineno, cells))
    if columns is None:
        raise FileFormatError(f"{path}: no column header found")
    return header, columns, rows


PATH_COLUMNS = ["waypoint_index", "x_m", "y_m", "z_m"]


def write_path_csv(path, candidate: CandidatePath, header: dict) -> None:
    rows = [(i, p.x, p.y, p.z) for i, p in enumerate(candidate.waypoints)]
    write_csv(path, header, PATH_COLUMNS, rows)


def read_path_csv(path):
    """Returns (CandidatePath, provenance header)."""
    header, columns, rows = read_csv(path)
    if columns != PATH_COLUMNS:
        raise FileFormatError(
            f"{path}: expected columns {','.join(PATH_COLUMNS)}, got {','.join(columns)}"
        )
    if not rows:
        raise FileFormatError(f"{path}: no waypoint rows")
    points = []
    for lineno, cells in rows:
        try:
            points.append(Point3(float(cells[1]), float(cells[2]), float(cells[3])))
        except ValueError as exc:
            raise FileFormatError(f"{path}:{lineno}: bad waypoint row: {exc}") from exc
    try:
        return CandidatePath(tuple(points)), header
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_convergence_csv(path, trace, header: dict) -> None:
    rows = [(i, b.total, b.j1, b.j2, b.j3) for i, b in enumerate(trace)]
    write_csv(path, header, ["iteration", "best_total", "j1", "j2", "j3"], rows)


def write_traces_csv(path, traces, header: dict) -> None:
    rows = []
    for uav_index, trace in enumerate(traces):
        for t, p in zip(trace.times, trace.positions):
            rows.append((fmt(t), str(uav_index), fmt(p[0]), fmt(p[1]), fmt(p[2])))
    write_csv(path, header, ["time_s", "uav_index", "x", "y", "z"], rows)


def write_error_csv(path, series_per_uav, header: dict) -> None:
    rows = []
    for uav_index, series in enumerate(series_per_uav):
        for waypoint_index, error in enumerate(series.errors):
            rows.append((uav_index, waypoint_index, float(error)))
    write_csv(path, header, ["uav_index", "waypoint_index", "error_m"], rows)


def write_geojson(path, candidate: CandidatePath, properties: dict) -> None:
    doc = {
        "type": "FeatureCollection",
        "crs": {
            "type": "name",
            "properties": {
                "name": "LOCAL_METERS",
                "note": "local planar meters (x east, y north, z up), "
                        "not a registered CRS",
            },
        },
        "features": [
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[p.x, p.y, p.z] for p in candidate.waypoints],
                },
                "properties": properties,
            }
        ],
    }
    Path(path).write_text(
        json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def write_json(path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n",
        encoding="utf-8",
    )
