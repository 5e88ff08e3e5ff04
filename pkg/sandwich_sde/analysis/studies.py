"""
Monte Carlo studies of the scheme: tail decay near the bound, strong convergence in
the mesh and the truncation level, and moment finiteness.

Every study simulates its paths in fixed batches through ``run_tasks`` and reduces
per-path numbers with ``math.fsum``, so reports are identical for any worker count.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from sandwich_sde.analysis.moments import upper_moment_estimate
from sandwich_sde.analysis.report import PowerLawFit, StudyReport, fit_power_law
from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.drift.model import DriftModel
from sandwich_sde.noise.sampling import NoiseSpec, sample_noise_paths
from sandwich_sde.scheme.euler import run_scheme_batch
from sandwich_sde.scheme.montecarlo import run_tasks, simulate_paths, split_batches
from sandwich_sde.scheme.truncation import TruncatedDrift, gap_delta_n, truncate_drift

logger = logging.getLogger(__name__)

DEFAULT_ORDER_MARGIN = 0.05
DEFAULT_TAIL_P = 40.0
# reference grid of a convergence study, as a multiple of the finest ladder grid
REFERENCE_FACTOR = 4


def _execution(workers: Optional[int], batch_size: Optional[int]) -> Tuple[int, int]:
    if workers is None or batch_size is None:
        from sandwich_sde.common.config import settings

        workers = settings.workers if workers is None else workers
        batch_size = settings.batch_size if batch_size is None else batch_size
    return workers, batch_size


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _check_ladder(values: Sequence[float], minimum: int, name: str) -> List[float]:
    values = list(values)
    if len(values) < minimum:
        raise InvalidArgumentError(f"{name} needs at least {minimum} values, got {len(values)}")
    if any(v <= 0 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidArgumentError(f"{name} must be positive and strictly increasing, got {values}")
    return values


# -- tail exponent ---------------------------------------------------------------------


def tail_probabilities(min_gaps: Sequence[float], ladder: Sequence[float]) -> np.ndarray:
    """Empirical P(min_t distance ≤ ε) for every ε of the ladder."""
    gaps = np.asarray(min_gaps, dtype=np.float64)
    return np.array([np.count_nonzero(gaps <= eps) / gaps.shape[0] for eps in ladder])


def fit_tail(ladder: Sequence[float], probabilities: Sequence[float]) -> Optional[PowerLawFit]:
    """
    log P against log ε over the rungs with 0 < P < 1; saturated and empty rungs carry
    no slope information. Returns None with fewer than two usable rungs.
    """
    ladder = np.asarray(ladder, dtype=np.float64)
    probabilities = np.asarray(probabilities, dtype=np.float64)
    usable = (probabilities > 0) & (probabilities < 1)
    if np.count_nonzero(usable) < 2:
        return None
    return fit_power_law(ladder[usable], probabilities[usable])


def tail_exponent_study(
    model: DriftModel,
    spec: NoiseSpec,
    n: int,
    grid: TimeGrid,
    eps_ladder: Sequence[float],
    paths: int,
    seed: int,
    y0: float,
    order: Optional[float] = None,
    p: float = DEFAULT_TAIL_P,
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
    strict: bool = True,
) -> StudyReport:
    """
    Decay of P(min_t (Y_t − φ(t)) ≤ ε) as ε → 0 against the exponent γλ_p + λ_p − 1,
    λ_p = λ − 2/p (two-sided: distance to the nearer bound).

    Passes when the fitted slope is at least the exponent minus two standard errors.
    Empty counts at every rung, or fewer than two rungs strictly between 0 and 1, make
    the study inconclusive, which still counts as a pass.
    """
    if not model.singular:
        raise InvalidArgumentError(f"model '{model.name}' has no bound to approach")
    ladder = _check_ladder(eps_ladder, 4, "ε ladder")
    order = spec.holder_limit - DEFAULT_ORDER_MARGIN if order is None else order
    order_p = order - 2.0 / p
    if order_p <= 1.0 / (1.0 + model.gamma):
        raise InvalidArgumentError(f"λ_p = λ − 2/p = {order_p:g} must exceed 1/(1+γ) = {1.0 / (1.0 + model.gamma):g}")
    expected = model.gamma * order_p + order_p - 1.0

    runs = simulate_paths(model, spec, grid, n, y0, seed, paths, *_execution(workers, batch_size), strict=strict)
    gaps = []
    for run in runs:
        gap = run.result.min_lower_gap
        if run.result.min_upper_gap is not None:
            gap = min(gap, run.result.min_upper_gap)
        gaps.append(gap)
    probabilities = tail_probabilities(gaps, ladder)
    fit = fit_tail(ladder, probabilities)

    notes = []
    inconclusive = fit is None
    if not np.any(probabilities > 0):
        notes.append("no path came within the largest ε of the bound")
    elif fit is None:
        notes.append("fewer than two rungs with 0 < P < 1")
    passed = inconclusive or fit.slope >= expected - 2.0 * fit.stderr
    logger.info(
        f"Tail study on '{model.name}': P={probabilities.tolist()}, expected exponent {expected:.4g}, "
        f"slope {'n/a' if fit is None else f'{fit.slope:.4g} ± {fit.stderr:.2g}'}"
    )
    return StudyReport(
        kind="tail",
        parameters={
            "model": model.name,
            "level": n,
            "steps": grid.steps,
            "horizon": grid.horizon,
            "initial": y0,
            "paths": paths,
            "seed": seed,
            "order": order,
            "p": p,
            "order_p": order_p,
            "eps_ladder": ladder,
        },
        metrics={
            "probabilities": probabilities.tolist(),
            "counts": [int(round(q * paths)) for q in probabilities],
            "min_gap": float(np.min(gaps)),
        },
        fit=fit,
        expected=expected,
        passed=passed,
        inconclusive=inconclusive,
        notes=notes,
    )


# -- convergence -------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceTask:
    spec: NoiseSpec
    reference: TimeGrid
    y0: float
    seed: int
    indices: Tuple[int, ...]
    top: TruncatedDrift
    by_level: Tuple[TruncatedDrift, ...]
    steps: Tuple[int, ...]


def _sup_errors(trunc: TruncatedDrift, steps: int, task: ConvergenceTask, noise, reference) -> List[float]:
    grid = TimeGrid(task.reference.horizon, steps)
    factor = task.reference.coarsening_factor(grid)
    results = run_scheme_batch(trunc, grid, noise[:, ::factor], task.y0)
    return [float(np.max(np.abs(reference[i] - result.interpolate(task.reference)))) for i, result in enumerate(results)]


def converge_batch(task: ConvergenceTask) -> Dict[str, np.ndarray]:
    """Per-path sup errors against the reference run on the same noise."""
    noise = sample_noise_paths(task.spec, task.reference, task.seed, task.indices)
    reference = np.vstack([r.path.values for r in run_scheme_batch(task.top, task.reference, noise, task.y0)])
    by_steps = [_sup_errors(task.top, steps, task, noise, reference) for steps in task.steps]
    by_level = [_sup_errors(trunc, task.steps[-1], task, noise, reference) for trunc in task.by_level]
    return {"by_steps": np.array(by_steps).T, "by_level": np.array(by_level).T}


def convergence_study(
    model: DriftModel,
    spec: NoiseSpec,
    n_ladder: Sequence[int],
    steps_ladder: Sequence[int],
    paths: int,
    seed: int,
    y0: float,
    reference_steps: Optional[int] = None,
    min_order: float = 0.5,
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
    strict: bool = True,
) -> StudyReport:
    """
    Mean sup-over-t error of the scheme against a reference run at (max n,
    ``reference_steps``) on the same noise realizations.

    The error-vs-N fit uses the largest level; the error-vs-n table uses the finest
    ladder grid. Passes when the error strictly decreases in N and the fitted order
    −slope is at least ``min_order``.

    Raises:
        NumericError: If the reference or a ladder run diverges, with the node index.
    """
    levels = [int(n) for n in _check_ladder(n_ladder, 3, "n ladder")]
    steps = [int(s) for s in _check_ladder(steps_ladder, 3, "N ladder")]
    reference_steps = REFERENCE_FACTOR * steps[-1] if reference_steps is None else int(reference_steps)
    if any(reference_steps % s for s in steps) or reference_steps < steps[-1]:
        raise InvalidArgumentError(f"reference grid N={reference_steps} must be a multiple of every ladder grid")
    if paths < 1:
        raise InvalidArgumentError(f"need at least one path, got {paths}")
    workers, batch_size = _execution(workers, batch_size)

    reference = TimeGrid(model.horizon, reference_steps)
    by_level = tuple(truncate_drift(model, n, strict=strict) for n in levels)
    tasks = [
        ConvergenceTask(spec, reference, y0, seed, indices, by_level[-1], by_level, tuple(steps))
        for indices in split_batches(list(range(paths)), batch_size)
    ]
    logger.info(
        f"Convergence study on '{model.name}': {paths} paths, N ladder {steps}, n ladder {levels}, "
        f"reference N={reference_steps}"
    )
    outputs = run_tasks(converge_batch, tasks, workers)
    errors_steps = np.vstack([out["by_steps"] for out in outputs])
    errors_level = np.vstack([out["by_level"] for out in outputs])
    mean_steps = [_mean(errors_steps[:, j]) for j in range(len(steps))]
    mean_level = [_mean(errors_level[:, j]) for j in range(len(levels))]

    notes = []
    fit = None
    inconclusive = False
    decreasing = all(b < a for a, b in zip(mean_steps, mean_steps[1:]))
    if all(e == 0 for e in mean_steps):
        inconclusive = True
        notes.append("scheme reproduces the reference exactly on every grid")
        passed = True
    elif any(e <= 0 for e in mean_steps):
        notes.append("zero error on some but not all grids; no fit")
        passed = False
    else:
        fit = fit_power_law(steps, mean_steps)
        passed = decreasing and -fit.slope >= min_order
    if not decreasing and not inconclusive:
        notes.append("mean error is not strictly decreasing in N")

    deltas = None
    if model.singular:
        deltas = [gap_delta_n(model, n, strict=strict) for n in levels]
    logger.info(f"Convergence errors by N: {mean_steps}; order {'n/a' if fit is None else f'{-fit.slope:.3g}'}")
    return StudyReport(
        kind="convergence",
        parameters={
            "model": model.name,
            "levels": levels,
            "steps": steps,
            "reference_steps": reference_steps,
            "horizon": model.horizon,
            "initial": y0,
            "paths": paths,
            "seed": seed,
            "min_order": min_order,
        },
        metrics={
            "error_by_steps": mean_steps,
            "error_by_level": mean_level,
            "delta_n": deltas,
            "order": None if fit is None else -fit.slope,
        },
        fit=fit,
        expected=min_order,
        passed=passed,
        inconclusive=inconclusive,
        notes=notes,
    )


# -- moments -------------------------------------------------------------------------------


def moment_study(
    model: DriftModel,
    spec: NoiseSpec,
    grid: TimeGrid,
    level: int,
    y0: float,
    paths: int,
    seed: int,
    orders: Sequence[float] = (1.0, 2.0),
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
    strict: bool = True,
) -> StudyReport:
    """Moment estimates of every order in ``orders`` on one sample; passes when all are stable."""
    runs = simulate_paths(model, spec, grid, level, y0, seed, paths, *_execution(workers, batch_size), strict=strict)
    sample = [run.result.path for run in runs]
    reports = [upper_moment_estimate(sample, r, model) for r in orders]
    return StudyReport(
        kind="moments",
        parameters={
            "model": model.name,
            "level": level,
            "steps": grid.steps,
            "horizon": grid.horizon,
            "initial": y0,
            "paths": paths,
            "seed": seed,
            "orders": list(orders),
        },
        metrics={"moments": [report.to_dict() for report in reports]},
        passed=all(report.stable for report in reports),
    )
