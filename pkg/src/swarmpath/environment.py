"""Operation space, cylinder obstacles, and scenario files.

A scenario file is UTF-8 YAML. Lengths are meters, angles radians; all
coordinates live in a local planar frame (x east, y north, z up). The
schema, with `weights` and `pso` optional::

    operation_space:
      min: [x, y, z]          # axis-aligned box corners, min < max
      max: [x, y, z]
    start:  [x, y, z]         # must lie inside the box
    target: [x, y, z]
    obstacles:                # cylinders standing on their base
      - center: [x, y, z]     # base center; z is the base altitude
        radius: r             # > 0
        height: h             # > 0; the top sits at z + h
    formation:
      offsets: [[x, y, z], ...]   # per-UAV offset from the centroid
      quad_radius: r              # rotor-tip radius of one quadcopter
    altitude:                 # safe clearance band for free waypoints
      min: z
      max: z
    weights:                  # cost weights, defaults 1 / 100 / 10
      length: w
      violation: w
      altitude: w
    pso:                      # any subset of PsoConfig fields
      swarm_size: ...
      free_waypoints: ...
      inertia: ...
      c1: ...
      c2: ...
      iterations: ...
      seed: ...
      variant: theta | classic
      convergence_window: ...
      convergence_epsilon: ...
"""

from __future__ import annotations

import hashlib
import io
import math
import os
from dataclasses import dataclass, fields

import yaml

from .cost import CostWeights
from .formation import FormationSpec
from .geometry import Point3
from .optimizer import PsoConfig


class ScenarioError(ValueError):
    """Base for everything wrong with a scenario file."""


class ScenarioParseError(ScenarioError):
    """The text is not well-formed."""


class ScenarioValidationError(ScenarioError):
    """The text parsed but violates an invariant; names the field."""


@dataclass(frozen=True)
class OperationSpace:
    """Axis-aligned flight box."""

    min_corner: Point3
    max_corner: Point3

    def __post_init__(self):
        lo, hi = self.min_corner, self.max_corner
        if not (lo.x < hi.x and lo.y < hi.y and lo.z < hi.z):
            raise ValueError(
                "operation_space.min must be strictly below .max on every axis"
            )

    def contains(self, p: Point3) -> bool:
        lo, hi = self.min_corner, self.max_corner
        return (lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y
                and lo.z <= p.z <= hi.z)

    @property
    def extent(self) -> Point3:
        return self.max_corner - self.min_corner


@dataclass(frozen=True)
class CylinderObstacle:
    """A vertical cylinder: base center, radius and height."""

    base_center: Point3
    radius: float
    height: float

    def __post_init__(self):
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "height", float(self.height))
        if not self.radius > 0.0:
            raise ValueError("obstacle radius must be > 0")
        if not self.height > 0.0:
            raise ValueError("obstacle height must be > 0")

    @property
    def top_altitude(self) -> float:
        return self.base_center.z + self.height

    def safe_distance(self, probe_altitude: float) -> float:
        """Base-center-to-surface distance at the probe altitude.

        Above the top the distance to the rim is used, so the value is
        continuous and constant beyond the cylinder top.
        """
        z = min(probe_altitude, self.top_altitude)
        dz = z - self.base_center.z
        return math.sqrt(self.radius * self.radius + dz * dz)


def safe_distance(obstacle: CylinderObstacle, probe_altitude: float) -> float:
    """Module-level alias of CylinderObstacle.safe_distance."""
    return obstacle.safe_distance(probe_altitude)


@dataclass(frozen=True)
class Scenario:
    """A validated planning problem; immutable and safe to share."""

    operation_space: OperationSpace
    start: Point3
    target: Point3
    obstacles: tuple[CylinderObstacle, ...]
    formation: FormationSpec
    z_min: float
    z_max: float
    weights: CostWeights
    pso: PsoConfig


def _fail(path, message):
    raise ScenarioValidationError(f"{path}: {message}")


def _require_mapping(node, path):
    if not isinstance(node, dict):
        _fail(path, "expected a key/value mapping")
    return node


def _take(mapping, key, path, required=True, default=None):
    if key not in mapping:
        if required:
            _fail(path, f"missing required field '{key}'")
        return default
    return mapping.pop(key)


def _no_extras(mapping, path):
    if mapping:
        _fail(path, f"unknown field(s): {', '.join(sorted(map(str, mapping)))}")


def _number(node, path):
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        _fail(path, f"expected a number, got {node!r}")
    if not math.isfinite(float(node)):
        _fail(path, "must be finite")
    return float(node)


def _integer(node, path):
    if isinstance(node, bool) or not isinstance(node, int):
        _fail(path, f"expected an integer, got {node!r}")
    return int(node)


def _vec3(node, path) -> Point3:
    if not isinstance(node, (list, tuple)) or len(node) != 3:
        _fail(path, "expected a list of three numbers [x, y, z]")
    return Point3(*(_number(v, f"{path}[{i}]") for i, v in enumerate(node)))


def _pso_config(node, path) -> PsoConfig:
    if node is None:
        return PsoConfig()
    node = dict(_require_mapping(node, path))
    values = {}
    casts = {
        "swarm_size": _integer, "free_waypoints": _integer,
        "iterations": _integer, "seed": _integer,
        "convergence_window": _integer,
        "inertia": _number, "c1": _number, "c2": _number,
        "convergence_epsilon": _number,
    }
    for name, cast in casts.items():
        if name in node:
            values[name] = cast(node.pop(name), f"{path}.{name}")
    if "variant" in node:
        variant = node.pop("variant")
        if not isinstance(variant, str):
            _fail(f"{path}.variant", "expected a string")
        values["variant"] = variant
    _no_extras(node, path)
    try:
        return PsoConfig(**values)
    except ValueError as exc:
        _fail(path, str(exc))


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate scenario text."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        where = ""
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            where = f" at line {mark.line + 1}, column {mark.column + 1}"
        raise ScenarioParseError(f"scenario is not valid YAML{where}: {exc}") from exc

    doc = dict(_require_mapping(doc, "scenario"))

    space_node = dict(_require_mapping(_take(doc, "operation_space", "scenario"),
                                       "operation_space"))
    lo = _vec3(_take(space_node, "min", "operation_space"), "operation_space.min")
    hi = _vec3(_take(space_node, "max", "operation_space"), "operation_space.max")
    _no_extras(space_node, "operation_space")
    try:
        space = OperationSpace(lo, hi)
    except ValueError as exc:
        _fail("operation_space", str(exc))

    start = _vec3(_take(doc, "start", "scenario"), "start")
    target = _vec3(_take(doc, "target", "scenario"), "target")
    for name, point in (("start", start), ("target", target)):
        if not space.contains(point):
            _fail(name, "must lie inside the operation space")

    obstacles = []
    obstacles_node = _take(doc, "obstacles", "scenario", required=False, default=[])
    if obstacles_node is None:
        obstacles_node = []
    if not isinstance(obstacles_node, list):
        _fail("obstacles", "expected a list")
    for i, entry in enumerate(obstacles_node):
        path = f"obstacles[{i}]"
        entry = dict(_require_mapping(entry, path))
        center = _vec3(_take(entry, "center", path), f"{path}.center")
        radius = _number(_take(entry, "radius", path), f"{path}.radius")
        height = _number(_take(entry, "height", path), f"{path}.height")
        _no_extras(entry, path)
        try:
            obstacle = CylinderObstacle(center, radius, height)
        except ValueError as exc:
            _fail(path, str(exc))
        lo, hi = space.min_corner, space.max_corner
        if (center.x - radius < lo.x or center.x + radius > hi.x
                or center.y - radius < lo.y or center.y + radius > hi.y):
            _fail(path, "footprint must lie inside the operation space x-y extent")
        obstacles.append(obstacle)

    formation_node = dict(_require_mapping(_take(doc, "formation", "scenario"),
                                           "formation"))
    offsets_node = _take(formation_node, "offsets", "formation")
    if not isinstance(offsets_node, list) or not offsets_node:
        _fail("formation.offsets", "expected a non-empty list of [x, y, z] offsets")
    offsets = tuple(
        _vec3(v, f"formation.offsets[{i}]") for i, v in enumerate(offsets_node)
    )
    quad_radius = _number(_take(formation_node, "quad_radius", "formation"),
                          "formation.quad_radius")
    _no_extras(formation_node, "formation")
    try:
        formation = FormationSpec(offsets=offsets, quad_radius=quad_radius)
    except ValueError as exc:
        _fail("formation", str(exc))

    altitude_node = dict(_require_mapping(_take(doc, "altitude", "scenario"),
                                          "altitude"))
    z_min = _number(_take(altitude_node, "min", "altitude"), "altitude.min")
    z_max = _number(_take(altitude_node, "max", "altitude"), "altitude.max")
    _no_extras(altitude_node, "altitude")
    if not z_min < z_max:
        _fail("altitude", "altitude.min must be strictly below altitude.max")

    weights_node = _take(doc, "weights", "scenario", required=False)
    if weights_node is None:
        weights = CostWeights()
    else:
        weights_node = dict(_require_mapping(weights_node, "weights"))
        values = {
            name: _number(_take(weights_node, name, "weights"), f"weights.{name}")
            for name in ("length", "violation", "altitude")
        }
        _no_extras(weights_node, "weights")
        try:
            weights = CostWeights(**values)
        except ValueError as exc:
            _fail("weights", str(exc))

    pso = _pso_config(_take(doc, "pso", "scenario", required=False), "pso")
    _no_extras(doc, "scenario")

    return Scenario(
        operation_space=space,
        start=start,
        target=target,
        obstacles=tuple(obstacles),
        formation=formation,
        z_min=z_min,
        z_max=z_max,
        weights=weights,
        pso=pso,
    )


def load_scenario(source) -> Scenario:
    """Load a scenario from a path, byte/text stream, or bytes."""
    if isinstance(source, bytes):
        return parse_scenario(source.decode("utf-8"))
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return parse_scenario(data)
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as handle:
            return parse_scenario(handle.read())
    raise TypeError(f"cannot load a scenario from {type(source).__name__}")


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical YAML for a scenario; load(serialize(s)) == s exactly."""
    def vec(p: Point3):
        return [p.x, p.y, p.z]

    doc = {
        "operation_space": {
            "min": vec(scenario.operation_space.min_corner),
            "max": vec(scenario.operation_space.max_corner),
        },
        "start": vec(scenario.start),
        "target": vec(scenario.target),
        "obstacles": [
            {"center": vec(o.base_center), "radius": o.radius, "height": o.height}
            for o in scenario.obstacles
        ],
        "formation": {
            "offsets": [vec(o) for o in scenario.formation.offsets],
            "quad_radius": scenario.formation.quad_radius,
        },
        "altitude": {"min": scenario.z_min, "max": scenario.z_max},
        "weights": {
            "length": scenario.weights.length,
            "violation": scenario.weights.violation,
            "altitude": scenario.weights.altitude,
        },
        "pso": {f.name: getattr(scenario.pso, f.name) for f in fields(PsoConfig)},
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def scenario_fingerprint(scenario: Scenario) -> str:
    """SHA-256 of the canonical serialization; changes iff any field changes."""
    return hashlib.sha256(serialize_scenario(scenario).encode("utf-8")).hexdigest()


def scenario_warnings(scenario: Scenario) -> list[str]:
    """Non-fatal feasibility findings: endpoints outside the altitude
    band (their band penalty is waived, see the cost module) or inside
    an obstacle's inflated clearance sphere."""
    found = []
    inflate = (scenario.formation.quad_radius
               + scenario.formation.formation_radius)
    for name, point in (("start", scenario.start), ("target", scenario.target)):
        if point.z <= 0.0:
            found.append(f"{name} altitude {point.z:g} m is at or below ground")
        elif not scenario.z_min <= point.z <= scenario.z_max:
            found.append(
                f"{name} altitude {point.z:g} m is outside the safe band "
                f"[{scenario.z_min:g}, {scenario.z_max:g}] m"
            )
        for k, obstacle in enumerate(scenario.obstacles):
            clearance = obstacle.safe_distance(point.z) + inflate
            if point.distance_to(obstacle.base_center) < clearance:
                found.append(
                    f"{name} lies within the inflated clearance of obstacles[{k}]"
                )
    return found
