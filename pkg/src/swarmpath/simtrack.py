"""Kinematic tracking simulator and the planned-vs-flown error metric.

The follower moves along each planned polyline at constant speed and is
sampled on a fixed timestep, optionally with zero-mean Gaussian noise
per axis to mimic positioning error. No vehicle dynamics: this exists
to exercise path derivation and the error metric, not to model a drone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cost import CandidatePath


@dataclass(frozen=True)
class SimConfig:
    """Follower speed, sampling timestep, per-axis noise sigma and seed."""

    speed: float = 2.0
    timestep: float = 0.1
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.speed > 0.0:
            raise ValueError("speed must be > 0")
        if not self.timestep > 0.0:
            raise ValueError("timestep must be > 0")
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be >= 0")


@dataclass(frozen=True)
class Trace:
    """Time-stamped position samples of one UAV."""

    times: np.ndarray      # (n,), strictly increasing, starts at 0
    positions: np.ndarray  # (n, 3)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.positions, dtype=float)
        if p.shape != (t.size, 3):
            raise ValueError("positions must be (len(times), 3)")
        if t.size == 0 or (t.size > 1 and not np.all(np.diff(t) > 0.0)):
            raise ValueError("timestamps must be non-empty and strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)


@dataclass(frozen=True)
class ErrorSeries:
    """Closest-sample distance from each planned waypoint to a flown trace."""

    errors: np.ndarray

    @property
    def max_error(self) -> float:
        return float(self.errors.max())

    @property
    def mean_error(self) -> float:
        return float(self.errors.mean())


def _sample_polyline(waypoints: np.ndarray, config: SimConfig):
    segment_lengths = np.sqrt((np.diff(waypoints, axis=0) ** 2).sum(axis=1))
    arc = np.concatenate([[0.0], np.cumsum(segment_lengths)])
    total = float(arc[-1])
    if total == 0.0:
        return np.zeros(1), waypoints[:1].copy()
    # sampling adequacy: the along-path sample spacing must resolve the
    # path; near-duplicate waypoints from converged plans are fine
    # because samples are spaced by arc length, not per segment
    step = config.speed * config.timestep
    if step >= total:
        raise ValueError(
            f"speed*timestep = {step:g} m must be below the path length "
            f"({total:g} m) for adequate sampling"
        )
    duration = total / config.speed
    times = np.arange(int(duration / config.timestep) + 1) * config.timestep
    if duration - times[-1] > 1e-9:
        times = np.append(times, duration)
    distances = np.minimum(times * config.speed, total)
    positions = np.stack(
        [np.interp(distances, arc, waypoints[:, i]) for i in range(3)], axis=1
    )
    return times, positions


def simulate(paths, config: SimConfig) -> list[Trace]:
    """Fly each planned path at constant speed; deterministic per seed.

    Noise is added to every sample, including the first, on top of
    exact polyline positions.
    """
    if not paths:
        raise ValueError("simulate needs at least one path")
    rng = np.random.default_rng(config.seed)
    traces = []
    for path in paths:
        waypoints = path.array if isinstance(path, CandidatePath) else np.asarray(path, float)
        times, positions = _sample_polyline(waypoints, config)
        if config.noise_sigma > 0.0:
            positions = positions + rng.normal(
                0.0, config.noise_sigma, size=positions.shape
            )
        traces.append(Trace(times, positions))
    return traces


def path_error(planned: CandidatePath, flown: Trace) -> ErrorSeries:
    """Distance from each planned waypoint to the closest flown sample."""
    waypoints = planned.array
    samples = flown.positions
    deltas = waypoints[:, None, :] - samples[None, :, :]
    distances = np.sqrt((deltas**2).sum(axis=2))
    return ErrorSeries(distances.min(axis=1))
