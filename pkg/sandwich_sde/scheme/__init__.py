from sandwich_sde.scheme.euler import (
    SchemeResult,
    approximating_path,
    approximating_sequence,
    euler_semiheuristic,
    run_scheme_batch,
)
from sandwich_sde.scheme.montecarlo import PathRun, run_tasks, simulate_paths
from sandwich_sde.scheme.truncation import (
    TruncatedDrift,
    collar_roots,
    epsilon_n,
    gap_delta_n,
    minimum_level,
    truncate_drift,
    truncation_radius,
)

__all__ = [
    "PathRun",
    "SchemeResult",
    "TruncatedDrift",
    "approximating_path",
    "approximating_sequence",
    "collar_roots",
    "epsilon_n",
    "euler_semiheuristic",
    "gap_delta_n",
    "minimum_level",
    "run_scheme_batch",
    "run_tasks",
    "simulate_paths",
    "truncate_drift",
    "truncation_radius",
]
