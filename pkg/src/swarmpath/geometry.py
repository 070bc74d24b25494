"""Points, Euler rotations, centroid and formation radius in the inertial frame.

All lengths are meters, all angles radians. Every type here is immutable
and every function pure, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TAU = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Map an angle to the canonical interval (-pi, pi]."""
    a = angle % _TAU
    if a > math.pi:
        a -= _TAU
    return a


@dataclass(frozen=True)
class Point3:
    """A 3D coordinate in meters in the inertial frame."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Point3.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, values) -> "Point3":
        x, y, z = values
        return cls(float(x), float(y), float(z))

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def distance_to(self, other: "Point3") -> float:
        return (self - other).norm()


@dataclass(frozen=True)
class EulerAngles:
    """Roll, pitch, yaw in radians, normalized to (-pi, pi] on construction."""

    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("roll", "pitch", "yaw"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"EulerAngles.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, normalize_angle(value))


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """A proper rotation: orthonormal 3x3 matrix with determinant +1.

    Orthonormality and the determinant are validated to 1e-9 on
    construction, so holding a RotationMatrix is proof of the invariant.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got shape {m.shape}")
        if not np.all(np.abs(m @ m.T - np.eye(3)) <= 1e-9):
            raise ValueError("matrix is not orthonormal within 1e-9")
        if abs(float(np.linalg.det(m)) - 1.0) > 1e-9:
            raise ValueError("matrix determinant is not +1 within 1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def inverse(self) -> "RotationMatrix":
        # exact for orthonormal matrices, no numeric inversion needed
        return RotationMatrix(self.matrix.T.copy())

    def apply(self, point):
        """Rotate a Point3 or a length-3 array."""
        if isinstance(point, Point3):
            return Point3.of(self.matrix @ point.xyz)
        return self.matrix @ np.asarray(point, dtype=float)


def rotation_from_euler(angles: EulerAngles) -> RotationMatrix:
    """Rotation taking formation-frame vectors into the inertial frame.

    Composition order is yaw about z, then pitch about y, then roll
    about x; the inverse transform is the transpose.
    """
    sp, cp = math.sin(angles.roll), math.cos(angles.roll)
    st, ct = math.sin(angles.pitch), math.cos(angles.pitch)
    sy, cy = math.sin(angles.yaw), math.cos(angles.yaw)
    m = np.array(
        [
            [cy * ct, cy * st * sp - sy * cp, cy * st * cp + sy * sp],
            [sy * ct, sy * st * sp + cy * cp, sy * st * cp - cy * sp],
            [-st, ct * sp, ct * cp],
        ]
    )
    return RotationMatrix(m)


def centroid(positions) -> Point3:
    """Component-wise mean of a non-empty list of points."""
    if not positions:
        raise ValueError("empty formation: centroid needs at least one position")
    n = len(positions)
    return Point3(
        sum(p.x for p in positions) / n,
        sum(p.y for p in positions) / n,
        sum(p.z for p in positions) / n,
    )


def formation_radius(offsets) -> float:
    """Largest distance from the centroid over the per-UAV offsets."""
    if not offsets:
        raise ValueError("empty formation: radius needs at least one offset")
    return max(o.norm() for o in offsets)
