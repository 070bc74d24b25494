"""Multi-UAV formation path planning with angle-encoded particle swarm search.

The library plans a collision-free path for the centroid of a rigid UAV
formation inside a boxed operation space with cylinder obstacles and an
altitude band, derives the per-UAV paths from the formation offsets,
and replays them with a kinematic tracking simulator.
"""

from importlib import resources
from pathlib import Path

from .cost import (
    CandidatePath,
    CostBreakdown,
    CostWeights,
    altitude_cost,
    evaluate,
    path_length,
    violation_cost,
)
from .environment import (
    CylinderObstacle,
    OperationSpace,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    load_scenario,
    safe_distance,
    scenario_fingerprint,
    scenario_warnings,
    serialize_scenario,
)
from .formation import FormationSpec, TrackingError, derive_paths, tracking_error
from .geometry import (
    EulerAngles,
    Point3,
    RotationMatrix,
    centroid,
    formation_radius,
    rotation_from_euler,
)
from .optimizer import (
    ComparisonResult,
    PsoConfig,
    RunReport,
    SwarmState,
    VariantSummary,
    compare,
    convergence_iteration,
    decode,
    run,
    step_classic,
    step_theta,
)
from .simtrack import SimConfig, Trace, ErrorSeries, path_error, simulate

__version__ = "0.1.0"


def benchmark_path() -> Path:
    """Filesystem path of the bundled benchmark scenario."""
    return Path(str(resources.files(__name__).joinpath("data/benchmark.yaml")))


def benchmark_scenario() -> Scenario:
    """Load the bundled ten-obstacle benchmark scenario."""
    return load_scenario(benchmark_path())


def openfield_path() -> Path:
    """Filesystem path of the bundled obstacle-free sanity scenario."""
    return Path(str(resources.files(__name__).joinpath("data/openfield.yaml")))


def openfield_scenario() -> Scenario:
    """Load the bundled obstacle-free scenario (straight line optimal)."""
    return load_scenario(openfield_path())
