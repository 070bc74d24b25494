"""Per-UAV paths derived from the centroid path, and tracking errors.

The formation is treated as a rigid body: each UAV flies the centroid
path shifted by its constant offset. Offsets are interpreted in the
inertial frame by default; formation-frame offsets are rotated through
the per-waypoint attitude before being applied.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cost import CandidatePath
from .geometry import (
    EulerAngles,
    Point3,
    formation_radius as _max_offset_norm,
    rotation_from_euler,
)

_FRAMES = ("inertial", "formation")


@dataclass(frozen=True)
class FormationSpec:
    """Rigid formation geometry: per-UAV offsets and the quadcopter radius."""

    offsets: tuple[Point3, ...]
    quad_radius: float
    offset_frame: str = "inertial"

    def __post_init__(self):
        offsets = tuple(self.offsets)
        if not offsets:
            raise ValueError("formation needs at least one UAV offset")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "quad_radius", float(self.quad_radius))
        if not self.quad_radius > 0.0:
            raise ValueError("quad_radius must be > 0")
        if self.offset_frame not in _FRAMES:
            raise ValueError(f"offset_frame must be one of {_FRAMES}")

    @property
    def formation_radius(self) -> float:
        # recomputed from the offsets so it can never go stale
        return _max_offset_norm(self.offsets)

    @property
    def uav_count(self) -> int:
        return len(self.offsets)


@dataclass(frozen=True)
class TrackingError:
    """Desired-minus-actual position error in both frames.

    Rotation preserves length, so the two vectors must have equal norm;
    this is checked to 1e-9 on construction.
    """

    inertial: Point3
    formation_frame: Point3

    def __post_init__(self):
        if abs(self.inertial.norm() - self.formation_frame.norm()) > 1e-9:
            raise ValueError("frame error norms disagree beyond 1e-9")


def _attitude_list(attitudes, n: int):
    if attitudes is None:
        return [EulerAngles()] * n
    if isinstance(attitudes, EulerAngles):
        return [attitudes] * n
    attitudes = list(attitudes)
    if len(attitudes) != n:
        raise ValueError(
            f"need one attitude per waypoint ({n}), got {len(attitudes)}"
        )
    return attitudes


def derive_paths(centroid_path: CandidatePath, spec: FormationSpec,
                 attitudes=None) -> list[CandidatePath]:
    """Shift the centroid path by each UAV offset.

    With inertial offsets the attitude is ignored; with formation-frame
    offsets each waypoint's offset is rotated by that waypoint's
    attitude (identity when none is given).
    """
    waypoints = centroid_path.waypoints
    if spec.offset_frame == "inertial":
        return [
            CandidatePath(tuple(w + off for w in waypoints))
            for off in spec.offsets
        ]
    rotations = [
        rotation_from_euler(a)
        for a in _attitude_list(attitudes, len(waypoints))
    ]
    return [
        CandidatePath(tuple(w + r.apply(off)
                            for w, r in zip(waypoints, rotations)))
        for off in spec.offsets
    ]


def tracking_error(desired: Point3, actual: Point3,
                   attitude: EulerAngles = EulerAngles()) -> TrackingError:
    """Position error in the inertial frame and rotated into the formation frame."""
    inertial = desired - actual
    r_fo = rotation_from_euler(attitude).inverse
    return TrackingError(inertial, r_fo.apply(inertial))
