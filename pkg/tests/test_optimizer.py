import math
from dataclasses import replace

import numpy as np
import pytest

import swarmpath as sp
from swarmpath.geometry import Point3
from swarmpath.optimizer import (
    HALF_PI,
    PsoConfig,
    axis_bounds,
    compare,
    convergence_iteration,
    decode,
    init_swarm,
    run,
    sine_map,
    step_classic,
    step_theta,
)


class OnesRng:
    """Stub generator: every uniform draw is 1.0 (forces r1 = r2 = 1)."""

    def uniform(self, low=0.0, high=1.0, size=None):
        return np.ones(size)


def quadratic_eval(target, weight=1.0):
    def evaluate(coords):
        f = weight * ((coords - target) ** 2).sum(axis=1)
        zeros = np.zeros_like(f)
        return np.stack([f, zeros, zeros, f], axis=1)
    return evaluate


@pytest.fixture(scope="module")
def benchmark():
    return sp.benchmark_scenario()


@pytest.fixture(scope="module")
def openfield():
    return sp.openfield_scenario()


# --- config and decode ----------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        PsoConfig(swarm_size=1)
    with pytest.raises(ValueError):
        PsoConfig(free_waypoints=0)
    with pytest.raises(ValueError):
        PsoConfig(variant="annealed")
    assert PsoConfig(free_waypoints=7).dimensions == 21


def test_decode_zero_angles_hit_box_center(benchmark):
    space = benchmark.operation_space
    path = decode(np.zeros(9), space, benchmark.start, benchmark.target)
    lo, hi = space.min_corner, space.max_corner
    for p in path.waypoints[1:-1]:
        assert p.x == pytest.approx((lo.x + hi.x) / 2, abs=1e-12)
        assert p.y == pytest.approx((lo.y + hi.y) / 2, abs=1e-12)
        assert p.z == pytest.approx((lo.z + hi.z) / 2, abs=1e-12)


def test_decode_extreme_angles_hit_corners(benchmark):
    space = benchmark.operation_space
    hi = space.max_corner
    path = decode(np.full(9, HALF_PI), space, benchmark.start, benchmark.target)
    for p in path.waypoints[1:-1]:
        assert (p.x, p.y, p.z) == (hi.x, hi.y, hi.z)
    mixed = np.concatenate([np.full(3, -HALF_PI), np.zeros(3), np.full(3, HALF_PI)])
    path = decode(mixed, space, benchmark.start, benchmark.target)
    lo = space.min_corner
    for p in path.waypoints[1:-1]:
        assert p.x == lo.x
        assert p.y == pytest.approx((lo.y + hi.y) / 2, abs=1e-12)
        assert p.z == hi.z


def test_decode_rejects_bad_length(benchmark):
    with pytest.raises(ValueError):
        decode(np.zeros(10), benchmark.operation_space, benchmark.start,
               benchmark.target)
    with pytest.raises(ValueError):
        decode(np.zeros(0), benchmark.operation_space, benchmark.start,
               benchmark.target)


def test_decode_output_always_inside_space(benchmark):
    rng = np.random.default_rng(4)
    space = benchmark.operation_space
    low, high = axis_bounds(space, 10)
    angles = rng.uniform(-HALF_PI, HALF_PI, size=(2000, 30))
    values = sine_map(angles, low, high)
    assert np.all(values >= low) and np.all(values <= high)
    for row in angles[:50]:
        path = decode(row, space, benchmark.start, benchmark.target)
        for p in path.waypoints:
            assert space.contains(p)


# --- step mechanics --------------------------------------------------------


def make_state(variant, low, high, evaluate, seed=0, n=6):
    cfg = PsoConfig(swarm_size=n, free_waypoints=max(1, low.size // 3),
                    variant=variant)
    rng = np.random.default_rng(seed)
    if low.size % 3:
        # synthetic low-dimensional problems bypass decode entirely
        cfg = replace(cfg, free_waypoints=1)
    state = init_swarm(replace(cfg, swarm_size=n), low, high, rng, evaluate)
    return state, rng


def test_step_theta_frozen_with_zero_coefficients():
    low, high = np.zeros(3), np.full(3, 10.0)
    evaluate = quadratic_eval(np.array([7.0, 7.0, 7.0]))
    cfg = PsoConfig(swarm_size=5, free_waypoints=1, inertia=0.0, c1=0.0, c2=0.0)
    rng = np.random.default_rng(1)
    state = init_swarm(cfg, low, high, rng, evaluate)
    before = state.position.copy()
    step_theta(state, cfg, low, high, rng, evaluate)
    assert np.array_equal(state.position, before)
    assert np.all(state.increment == 0.0)


def test_step_theta_pure_momentum_until_clamp():
    low, high = np.zeros(1), np.full(1, 10.0)
    evaluate = quadratic_eval(np.array([5.0]))
    cfg = PsoConfig(swarm_size=2, free_waypoints=1, inertia=1.0, c1=0.0, c2=0.0)
    rng = np.random.default_rng(0)
    state = init_swarm(cfg, low, high, rng, evaluate)
    state.position[:] = 0.0
    state.increment[:] = 0.1
    for k in range(1, 40):
        step_theta(state, cfg, low, high, rng, evaluate)
        expected = min(0.1 * k, HALF_PI)
        assert state.position[0, 0] == pytest.approx(expected, abs=1e-12)
    assert state.position[0, 0] == HALF_PI


def test_step_theta_reduction_with_forced_randoms():
    # w = 0, r1 = r2 = 1: the increment is exactly c1*(pbest-x) + c2*(gbest-x)
    low, high = np.zeros(1), np.full(1, 10.0)
    evaluate = quadratic_eval(np.array([5.0]))
    cfg = PsoConfig(swarm_size=2, free_waypoints=1, inertia=0.0, c1=0.3, c2=0.4)
    state = init_swarm(cfg, low, high, np.random.default_rng(3), evaluate)
    state.position[:] = 0.2
    state.best_position[:] = np.array([[0.6], [0.6]])
    state.gbest_position = np.array([1.0])
    step_theta(state, cfg, low, high, OnesRng(), evaluate)
    expected = 0.2 + 0.3 * (0.6 - 0.2) + 0.4 * (1.0 - 0.2)
    assert state.position[0, 0] == pytest.approx(expected, abs=1e-12)


def test_step_classic_frozen_and_fixed_point():
    low, high = np.zeros(2), np.full(2, 10.0)
    evaluate = quadratic_eval(np.array([7.0, 3.0]))
    cfg = PsoConfig(swarm_size=3, free_waypoints=1, inertia=0.0, c1=0.0, c2=0.0,
                    variant="classic")
    rng = np.random.default_rng(2)
    state = init_swarm(cfg, low, high, rng, evaluate)
    before = state.position.copy()
    step_classic(state, cfg, low, high, rng, evaluate)
    assert np.array_equal(state.position, before)

    # a particle sitting on the global best with zero velocity stays put
    cfg2 = PsoConfig(swarm_size=2, free_waypoints=1, inertia=0.5, c1=1.5, c2=1.5,
                     variant="classic")
    state = init_swarm(cfg2, low, high, np.random.default_rng(5), evaluate)
    state.position[0] = state.gbest_position.copy()
    state.best_position[0] = state.gbest_position.copy()
    state.increment[0] = 0.0
    state.best_cost[0] = state.gbest_cost.copy()
    pos = state.position[0].copy()
    step_classic(state, cfg2, low, high, np.random.default_rng(6), evaluate)
    assert np.array_equal(state.position[0], pos)


@pytest.mark.parametrize("variant", ["theta", "classic"])
def test_quadratic_converges_to_grid_scan_optimum(variant):
    # independent oracle: dense grid scan of (x - 7)^2 over [0, 10]
    grid = np.linspace(0.0, 10.0, 1_000_001)
    oracle_optimum = grid[np.argmin((grid - 7.0) ** 2)]
    assert abs(oracle_optimum - 7.0) < 1e-5

    low, high = np.zeros(1), np.full(1, 10.0)
    evaluate = quadratic_eval(np.array([7.0]))
    cfg = PsoConfig(swarm_size=20, free_waypoints=1, iterations=200,
                    variant=variant)
    for seed in range(5):
        rng = np.random.default_rng(seed)
        state = init_swarm(cfg, low, high, rng, evaluate)
        step = step_theta if variant == "theta" else step_classic
        for _ in range(cfg.iterations):
            step(state, cfg, low, high, rng, evaluate)
        best = (sine_map(state.gbest_position, low, high)
                if variant == "theta" else state.gbest_position)
        assert abs(best[0] - oracle_optimum) < 1e-3 * 10.0


def test_bounds_hold_after_every_step(benchmark):
    cfg = replace(benchmark.pso, swarm_size=20, iterations=40)
    seen = []

    def observer(state):
        assert np.all(np.abs(state.position) <= HALF_PI)
        assert np.all(np.abs(state.increment) <= HALF_PI)
        seen.append(state.iteration)

    run(benchmark, cfg, observer=observer)
    assert seen == list(range(41))

    low, high = axis_bounds(benchmark.operation_space, cfg.free_waypoints)

    def box_observer(state):
        assert np.all(state.position >= low) and np.all(state.position <= high)

    run(benchmark, replace(cfg, variant="classic"), observer=box_observer)


# --- run and compare -------------------------------------------------------


def test_run_obstacle_free_reaches_straight_line(openfield):
    straight = openfield.start.distance_to(openfield.target)
    for variant in ("theta", "classic"):
        report = run(openfield, replace(openfield.pso, seed=3, variant=variant))
        assert report.best_cost.j1 <= 1.05 * straight
        assert report.best_cost.j2 == 0.0
        assert report.best_cost.j3 == 0.0


def test_run_deterministic_trace(benchmark):
    cfg = replace(benchmark.pso, swarm_size=15, iterations=30, seed=42)
    a = run(benchmark, cfg)
    b = run(benchmark, cfg)
    assert a.best_path == b.best_path
    assert all(x.total == y.total and x.j1 == y.j1 and x.j2 == y.j2 and x.j3 == y.j3
               for x, y in zip(a.trace, b.trace))
    assert a.convergence_iteration == b.convergence_iteration


def test_run_trace_monotone_and_report_fields(benchmark):
    cfg = replace(benchmark.pso, swarm_size=20, iterations=50, seed=11)
    report = run(benchmark, cfg)
    totals = [b.total for b in report.trace]
    assert len(totals) == cfg.iterations + 1
    assert all(b <= a + 1e-15 for a, b in zip(totals, totals[1:]))
    assert report.seed == 11 and report.variant == "theta"
    assert report.wall_time_s > 0
    assert report.config == cfg
    assert report.best_cost.total == totals[-1]
    # endpoints preserved exactly
    assert report.best_path.start == benchmark.start
    assert report.best_path.target == benchmark.target


def test_run_warns_on_blocked_start(benchmark):
    from swarmpath.environment import CylinderObstacle
    blocked = replace(
        benchmark,
        obstacles=benchmark.obstacles + (
            CylinderObstacle(Point3(40.0, 12.0, 0.0), 4.0, 40.0),),
    )
    report = run(blocked, replace(benchmark.pso, swarm_size=10, iterations=5))
    assert any("start lies within" in w for w in report.warnings)


def test_convergence_iteration_definition():
    # constant trace settles immediately
    assert convergence_iteration([10.0] * 61, 30, 1e-4) == 0
    # early-stopping semantics: the first quiet stretch of `window`
    # iterations counts, like a patience-based stopper would report
    totals = [100.0] * 31 + [50.0] + [50.0] * 40
    assert convergence_iteration(totals, 30, 1e-4) == 0
    # a drop inside every candidate window defers convergence
    busy = [100.0 - k for k in range(31)] + [69.0] * 31
    assert convergence_iteration(busy, 30, 1e-2) == 31
    # never settles within the window
    steep = list(np.linspace(100, 1, 40))
    assert convergence_iteration(steep, 30, 1e-4) == 39
    # short traces report their full length
    assert convergence_iteration([5.0, 4.0], 30, 1e-4) == 1


def test_compare_single_run_rows(benchmark):
    cfg = replace(benchmark.pso, swarm_size=12, iterations=20)
    result = compare(benchmark, runs_per_variant=1, base_seed=9, config=cfg)
    assert {s.variant for s in result.summaries} == {"classic", "theta"}
    for summary in result.summaries:
        report = result.reports[summary.variant][0]
        assert summary.min_cost == summary.max_cost == summary.median_cost
        assert summary.min_cost == report.best_cost.total
        assert summary.median_convergence_iteration == report.convergence_iteration
        assert report.seed == 9


def test_compare_rejects_zero_runs(benchmark):
    with pytest.raises(ValueError):
        compare(benchmark, runs_per_variant=0, base_seed=1)


def test_swarm_state_particle_snapshots(benchmark):
    cfg = replace(benchmark.pso, swarm_size=8, iterations=4)
    low, high = axis_bounds(benchmark.operation_space, cfg.free_waypoints)
    start, target = benchmark.start.xyz, benchmark.target.xyz
    from swarmpath.cost import evaluate_batch
    from swarmpath.optimizer import waypoints_from_coords

    def evaluate(coords):
        return evaluate_batch(waypoints_from_coords(coords, start, target),
                              benchmark)

    rng = np.random.default_rng(0)
    state = init_swarm(cfg, low, high, rng, evaluate)
    particles = state.particles()
    assert len(particles) == 8
    p0 = particles[0]
    assert p0.angles.shape == (30,) and p0.increments.shape == (30,)
    assert np.all(np.abs(p0.angles) <= HALF_PI)
    assert p0.best_cost.total == state.best_cost[0, 3]
