"""Classic and angle-encoded particle swarm search over the waypoint space.

A candidate centroid path with v free waypoints is a point in a
3v-dimensional box (the x, y and z axis bounds of the operation space,
repeated per waypoint). The classic variant moves particles directly in
that box. The angle-encoded variant keeps a phase angle per dimension in
[-pi/2, pi/2] and maps it onto the box through a sine, which bounds the
effective step size and removes the need for velocity limits.

Randomness comes from a single seeded generator consumed in a fixed
order (one r1, r2 pair per particle per iteration, shared across that
particle's dimensions), so a report is fully determined by the
(seed, config, scenario) triple.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .cost import CandidatePath, CostBreakdown, evaluate_batch
from .geometry import Point3

HALF_PI = math.pi / 2.0

VARIANTS = ("classic", "theta")


@dataclass(frozen=True)
class PsoConfig:
    """Swarm parameters; defaults follow common PSO practice."""

    swarm_size: int = 100
    free_waypoints: int = 10
    inertia: float = 0.7298
    c1: float = 1.49618
    c2: float = 1.49618
    iterations: int = 300
    seed: int = 1
    variant: str = "theta"
    convergence_window: int = 30
    convergence_epsilon: float = 1e-4

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be >= 2")
        if self.free_waypoints < 1:
            raise ValueError("free_waypoints must be >= 1")
        if self.inertia < 0 or self.c1 < 0 or self.c2 < 0:
            raise ValueError("inertia and gains must be >= 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.convergence_window < 1 or self.convergence_epsilon <= 0:
            raise ValueError("invalid convergence criterion")

    @property
    def dimensions(self) -> int:
        return 3 * self.free_waypoints


@dataclass
class ThetaParticle:
    """Snapshot of one angle-encoded particle."""

    angles: np.ndarray
    increments: np.ndarray
    best_angles: np.ndarray
    best_cost: CostBreakdown


@dataclass
class ClassicParticle:
    """Snapshot of one position/velocity particle."""

    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_cost: CostBreakdown


@dataclass
class SwarmState:
    """Whole-swarm arrays; row i belongs to particle i.

    For the theta variant `position`/`increment` hold phase angles and
    their increments; for the classic variant raw coordinates and
    velocities. Personal and global bests live in the same encoding.
    """

    variant: str
    position: np.ndarray       # (N, S)
    increment: np.ndarray      # (N, S)
    best_position: np.ndarray  # (N, S)
    best_cost: np.ndarray      # (N, 4) columns j1, j2, j3, total
    gbest_position: np.ndarray  # (S,)
    gbest_cost: np.ndarray      # (4,)
    iteration: int = 0

    def gbest_breakdown(self) -> CostBreakdown:
        j1, j2, j3, total = self.gbest_cost
        return CostBreakdown(float(j1), float(j2), float(j3), float(total))

    def particle(self, i: int):
        cost = CostBreakdown(*(float(v) for v in self.best_cost[i]))
        if self.variant == "theta":
            return ThetaParticle(self.position[i].copy(), self.increment[i].copy(),
                                 self.best_position[i].copy(), cost)
        return ClassicParticle(self.position[i].copy(), self.increment[i].copy(),
                               self.best_position[i].copy(), cost)

    def particles(self):
        return [self.particle(i) for i in range(self.position.shape[0])]


@dataclass(frozen=True)
class RunReport:
    """Everything a single optimization run produced."""

    best_path: CandidatePath
    best_cost: CostBreakdown
    trace: tuple[CostBreakdown, ...]   # best-so-far after init and each iteration
    convergence_iteration: int
    seed: int
    variant: str
    wall_time_s: float
    warnings: tuple[str, ...]
    config: PsoConfig


def axis_bounds(space, free_waypoints: int):
    """Per-dimension lower/upper bounds: x block, then y block, then z block."""
    lo, hi = space.min_corner, space.max_corner
    v = free_waypoints
    low = np.concatenate([np.full(v, lo.x), np.full(v, lo.y), np.full(v, lo.z)])
    high = np.concatenate([np.full(v, hi.x), np.full(v, hi.y), np.full(v, hi.z)])
    return low, high


def sine_map(angles: np.ndarray, low: np.ndarray, high: np.ndarray) -> np.ndarray:
    """Map angles in [-pi/2, pi/2] onto [low, high] per dimension."""
    values = 0.5 * ((high - low) * np.sin(angles) + high + low)
    # guard the last-ulp overshoot so decoded points never leave the box
    return np.clip(values, low, high)


def decode(angles, space, start: Point3, target: Point3) -> CandidatePath:
    """Turn a 3v-dimensional angle vector into a candidate path."""
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size == 0 or angles.size % 3 != 0:
        raise ValueError(
            f"angle vector length must be a positive multiple of 3, got {angles.shape}"
        )
    v = angles.size // 3
    low, high = axis_bounds(space, v)
    values = sine_map(angles, low, high)
    free = values.reshape(3, v).T   # rows are waypoints, columns x, y, z
    points = [start] + [Point3.of(row) for row in free] + [target]
    return CandidatePath(tuple(points))


def waypoints_from_coords(coords: np.ndarray, start: np.ndarray,
                          target: np.ndarray) -> np.ndarray:
    """(B, 3v) coordinate rows -> (B, v+2, 3) waypoint blocks with endpoints."""
    n, s = coords.shape
    v = s // 3
    xyz = np.empty((n, v + 2, 3))
    xyz[:, 0, :] = start
    xyz[:, -1, :] = target
    xyz[:, 1:-1, :] = coords.reshape(n, 3, v).transpose(0, 2, 1)
    return xyz


def _update_bests(state: SwarmState, costs: np.ndarray) -> None:
    # strict improvement only; on ties the incumbent stays
    improved = costs[:, 3] < state.best_cost[:, 3]
    state.best_position[improved] = state.position[improved]
    state.best_cost[improved] = costs[improved]
    i = int(np.argmin(state.best_cost[:, 3]))
    if state.best_cost[i, 3] < state.gbest_cost[3]:
        state.gbest_position = state.best_position[i].copy()
        state.gbest_cost = state.best_cost[i].copy()


def init_swarm(config: PsoConfig, low: np.ndarray, high: np.ndarray,
               rng, evaluate) -> SwarmState:
    """Random initial swarm: zero increments, personal bests from the first scores."""
    n, s = config.swarm_size, low.size
    if config.variant == "theta":
        position = rng.uniform(-HALF_PI, HALF_PI, size=(n, s))
        coords = sine_map(position, low, high)
    else:
        position = rng.uniform(low, high, size=(n, s))
        coords = position
    costs = np.asarray(evaluate(coords), dtype=float)
    i = int(np.argmin(costs[:, 3]))
    return SwarmState(
        variant=config.variant,
        position=position,
        increment=np.zeros((n, s)),
        best_position=position.copy(),
        best_cost=costs.copy(),
        gbest_position=position[i].copy(),
        gbest_cost=costs[i].copy(),
    )


def _social_pull(state: SwarmState, config: PsoConfig, rng) -> np.ndarray:
    r = rng.uniform(size=(state.position.shape[0], 2))
    return (config.inertia * state.increment
            + config.c1 * r[:, :1] * (state.best_position - state.position)
            + config.c2 * r[:, 1:] * (state.gbest_position - state.position))


def step_theta(state: SwarmState, config: PsoConfig, low: np.ndarray,
               high: np.ndarray, rng, evaluate) -> SwarmState:
    """One angle-encoded iteration: increment, clamp, move, clamp, re-score."""
    increment = np.clip(_social_pull(state, config, rng), -HALF_PI, HALF_PI)
    state.position = np.clip(state.position + increment, -HALF_PI, HALF_PI)
    state.increment = increment
    _update_bests(state, evaluate(sine_map(state.position, low, high)))
    state.iteration += 1
    return state


def step_classic(state: SwarmState, config: PsoConfig, low: np.ndarray,
                 high: np.ndarray, rng, evaluate) -> SwarmState:
    """One classic iteration with velocity and position clamped to the box."""
    vmax = 0.5 * (high - low)
    velocity = np.clip(_social_pull(state, config, rng), -vmax, vmax)
    state.position = np.clip(state.position + velocity, low, high)
    state.increment = velocity
    _update_bests(state, evaluate(state.position))
    state.iteration += 1
    return state


def convergence_iteration(totals, window: int, epsilon: float) -> int:
    """First iteration after which the best cost improves by less than
    `epsilon` (relative) for `window` consecutive iterations; the total
    iteration count when the run never settles."""
    t = np.asarray(totals, dtype=float)
    iterations = t.size - 1
    if iterations < window:
        return iterations
    prev, cur = t[:-1], t[1:]
    with np.errstate(invalid="ignore"):
        relative = (prev - cur) / np.maximum(np.abs(prev), 1e-300)
    small = relative < epsilon
    small[np.isnan(relative)] = False   # inf-to-inf steps never count as settled
    for i in range(iterations - window + 1):
        if small[i:i + window].all():
            return i
    return iterations


def run(scenario, config: PsoConfig | None = None, observer=None) -> RunReport:
    """Optimize the centroid path for a scenario.

    `observer`, when given, is called with the swarm state after
    initialization and after every iteration (used for diagnostics and
    invariant checks). Deterministic for a fixed (seed, config, scenario).
    """
    from .environment import scenario_warnings  # runtime import breaks the module cycle

    cfg = config if config is not None else scenario.pso
    low, high = axis_bounds(scenario.operation_space, cfg.free_waypoints)
    start, target = scenario.start.xyz, scenario.target.xyz

    def evaluate(coords):
        return evaluate_batch(waypoints_from_coords(coords, start, target), scenario)

    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    state = init_swarm(cfg, low, high, rng, evaluate)
    trace = [state.gbest_breakdown()]
    if observer is not None:
        observer(state)
    step = step_theta if cfg.variant == "theta" else step_classic
    for _ in range(cfg.iterations):
        step(state, cfg, low, high, rng, evaluate)
        trace.append(state.gbest_breakdown())
        if observer is not None:
            observer(state)
    wall = time.perf_counter() - t0

    if cfg.variant == "theta":
        best_path = decode(state.gbest_position, scenario.operation_space,
                           scenario.start, scenario.target)
    else:
        block = waypoints_from_coords(state.gbest_position[None, :], start, target)[0]
        best_path = CandidatePath.from_array(block)
    # keep the exact endpoint objects so downstream equality checks hold
    best_path = CandidatePath(
        (scenario.start,) + best_path.waypoints[1:-1] + (scenario.target,))

    totals = [b.total for b in trace]
    return RunReport(
        best_path=best_path,
        best_cost=trace[-1],
        trace=tuple(trace),
        convergence_iteration=convergence_iteration(
            totals, cfg.convergence_window, cfg.convergence_epsilon),
        seed=cfg.seed,
        variant=cfg.variant,
        wall_time_s=wall,
        warnings=tuple(scenario_warnings(scenario)),
        config=cfg,
    )


@dataclass(frozen=True)
class VariantSummary:
    """Aggregate of one variant over a batch of seeded runs."""

    variant: str
    runs: int
    base_seed: int
    min_cost: float
    max_cost: float
    median_cost: float
    median_convergence_iteration: float


@dataclass
class ComparisonResult:
    """Both variants run on matched seeds, with per-run reports retained."""

    summaries: tuple[VariantSummary, ...]
    reports: dict = field(default_factory=dict)

    def summary(self, variant: str) -> VariantSummary:
        return next(s for s in self.summaries if s.variant == variant)


def compare(scenario, runs_per_variant: int, base_seed: int,
            config: PsoConfig | None = None) -> ComparisonResult:
    """Run both variants on seeds base_seed..base_seed+runs-1 and summarize.

    Reported figures are the min/max/median of the final best cost and
    the median iterations-to-convergence across the seeded runs.
    """
    if runs_per_variant < 1:
        raise ValueError("runs_per_variant must be >= 1")
    base = config if config is not None else scenario.pso
    summaries = []
    reports: dict[str, tuple[RunReport, ...]] = {}
    for variant in VARIANTS:
        batch = tuple(
            run(scenario, replace(base, variant=variant, seed=base_seed + k))
            for k in range(runs_per_variant)
        )
        finals = [r.best_cost.total for r in batch]
        iters = [r.convergence_iteration for r in batch]
        summaries.append(VariantSummary(
            variant=variant,
            runs=runs_per_variant,
            base_seed=base_seed,
            min_cost=min(finals),
            max_cost=max(finals),
            median_cost=statistics.median(finals),
            median_convergence_iteration=statistics.median(iters),
        ))
        reports[variant] = batch
    return ComparisonResult(summaries=tuple(summaries), reports=reports)
