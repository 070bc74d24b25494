"""Multi-objective path cost: length, obstacle violation, altitude band.

A candidate centroid path is scored as a weighted sum of three terms:

* length: sum of segment lengths in meters;
* violation: for each segment midpoint and obstacle, the penetration
  ratio of the obstacle's inflated clearance sphere (clearance radius
  plus quadcopter radius plus formation radius), averaged over the
  obstacles and then over the segments, so the result is in [0, 1];
* altitude: meters outside the safe altitude band, summed over the free
  waypoints, and an infinite penalty if any node of the path (endpoints
  included) is at or below ground level.

The fixed endpoints are exempt from the band term because they are not
decision variables; a scenario whose start or target sits outside the
band would otherwise put a constant floor under every candidate.

All functions are pure and safe to call concurrently. The batch
evaluator is the hot path for the optimizer; the scalar operations wrap
the exact same arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .geometry import Point3

if TYPE_CHECKING:
    from .environment import Scenario
    from .formation import FormationSpec


@dataclass(frozen=True)
class CostWeights:
    """Non-negative weights for the length, violation and altitude terms."""

    length: float = 1.0
    violation: float = 100.0
    altitude: float = 10.0

    def __post_init__(self):
        for name in ("length", "violation", "altitude"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"weight {name} must be finite and >= 0")
            object.__setattr__(self, name, value)
        if self.length == 0.0 and self.violation == 0.0 and self.altitude == 0.0:
            raise ValueError("at least one cost weight must be positive")


@dataclass(frozen=True)
class CostBreakdown:
    """Per-term costs plus their weighted total.

    j3 and total may be math.inf when the path touches the ground.
    """

    j1: float
    j2: float
    j3: float
    total: float


@dataclass(frozen=True)
class CandidatePath:
    """Ordered waypoints: fixed start, at least one free waypoint, fixed target."""

    waypoints: tuple[Point3, ...]

    def __post_init__(self):
        wps = tuple(self.waypoints)
        if len(wps) < 3:
            raise ValueError(
                "a candidate path needs start, target and at least one free waypoint"
            )
        object.__setattr__(self, "waypoints", wps)

    @classmethod
    def from_array(cls, xyz) -> "CandidatePath":
        return cls(tuple(Point3.of(row) for row in np.asarray(xyz, dtype=float)))

    @property
    def array(self) -> np.ndarray:
        return np.array([[p.x, p.y, p.z] for p in self.waypoints])

    @property
    def free_count(self) -> int:
        return len(self.waypoints) - 2

    @property
    def segment_count(self) -> int:
        return len(self.waypoints) - 1

    @property
    def start(self) -> Point3:
        return self.waypoints[0]

    @property
    def target(self) -> Point3:
        return self.waypoints[-1]


def _obstacle_arrays(obstacles):
    centers = np.array([o.base_center.xyz for o in obstacles])
    radii = np.array([o.radius for o in obstacles])
    tops = np.array([o.top_altitude for o in obstacles])
    return centers, radii, tops


def length_batch(xyz: np.ndarray) -> np.ndarray:
    """Path length of each (n, 3) waypoint block in a (B, n, 3) batch."""
    deltas = np.diff(xyz, axis=1)
    return np.sqrt((deltas**2).sum(axis=2)).sum(axis=1)


def violation_batch(xyz: np.ndarray, obstacles, quad_radius: float,
                    formation_radius: float) -> np.ndarray:
    """Normalized clearance-sphere penetration, in [0, 1] per path."""
    if len(obstacles) == 0:
        return np.zeros(xyz.shape[0])
    centers, radii, tops = _obstacle_arrays(obstacles)
    mids = 0.5 * (xyz[:, :-1, :] + xyz[:, 1:, :])          # (B, m, 3)
    diff = mids[:, :, None, :] - centers[None, None, :, :]  # (B, m, K, 3)
    dist = np.sqrt((diff**2).sum(axis=3))
    z_eff = np.minimum(mids[:, :, None, 2], tops[None, None, :])
    clearance = np.sqrt(radii[None, None, :] ** 2
                        + (z_eff - centers[None, None, :, 2]) ** 2)
    inflated = clearance + quad_radius + formation_radius
    penetration = np.clip(1.0 - dist / inflated, 0.0, None)
    return penetration.mean(axis=(1, 2))


def altitude_batch(xyz: np.ndarray, z_min: float, z_max: float) -> np.ndarray:
    """Meters outside [z_min, z_max] over free waypoints; inf for z <= 0 anywhere."""
    z = xyz[:, :, 2]
    free = z[:, 1:-1]
    over = np.clip(free - z_max, 0.0, None)
    under = np.clip(z_min - free, 0.0, None)
    out = (over + under).sum(axis=1)
    out[(z <= 0.0).any(axis=1)] = np.inf
    return out


def total_batch(j1: np.ndarray, j2: np.ndarray, j3: np.ndarray,
                weights: CostWeights) -> np.ndarray:
    total = weights.length * j1 + weights.violation * j2
    if weights.altitude > 0.0:
        # inf in j3 propagates; with a zero weight the term is dropped
        total = total + weights.altitude * j3
    return total


def evaluate_batch(xyz: np.ndarray, scenario) -> np.ndarray:
    """Score a (B, n, 3) batch of waypoint blocks; returns (B, 4) j1,j2,j3,total."""
    j1 = length_batch(xyz)
    j2 = violation_batch(
        xyz,
        scenario.obstacles,
        scenario.formation.quad_radius,
        scenario.formation.formation_radius,
    )
    j3 = altitude_batch(xyz, scenario.z_min, scenario.z_max)
    return np.stack([j1, j2, j3, total_batch(j1, j2, j3, scenario.weights)], axis=1)


def path_length(path: CandidatePath) -> float:
    """Sum of Euclidean segment lengths, meters."""
    return float(length_batch(path.array[None, :, :])[0])


def violation_cost(path: CandidatePath, obstacles,
                   formation: "FormationSpec") -> float:
    """Average obstacle penetration of the inflated clearance spheres, in [0, 1]."""
    return float(
        violation_batch(
            path.array[None, :, :],
            obstacles,
            formation.quad_radius,
            formation.formation_radius,
        )[0]
    )


def altitude_cost(path: CandidatePath, z_min: float, z_max: float) -> float:
    """Band penalty in meters, or math.inf if any node is at or below ground."""
    if z_min >= z_max:
        raise ValueError("altitude band requires z_min < z_max")
    return float(altitude_batch(path.array[None, :, :], z_min, z_max)[0])


def evaluate(path: CandidatePath, scenario: "Scenario") -> CostBreakdown:
    """Full cost breakdown of one path against a scenario.

    The path endpoints must equal the scenario start and target exactly.
    """
    if path.start != scenario.start or path.target != scenario.target:
        raise ValueError(
            "path endpoints do not match the scenario start/target"
        )
    j1, j2, j3, total = evaluate_batch(path.array[None, :, :], scenario)[0]
    return CostBreakdown(float(j1), float(j2), float(j3), float(total))
