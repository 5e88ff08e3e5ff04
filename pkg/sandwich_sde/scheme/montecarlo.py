"""
Deterministic parallel Monte Carlo over scheme paths.

Path i is always driven by ``RngStream(seed, i)`` and path indices are cut into
fixed-size batches, so the numbers produced do not depend on the worker count or on
which worker finishes first; results come back ordered by index.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.path import SamplePath
from sandwich_sde.core.rng import RngStream
from sandwich_sde.drift.model import DriftModel
from sandwich_sde.noise.sampling import NoiseSpec, sample_noise
from sandwich_sde.scheme.euler import SchemeResult, run_scheme_batch
from sandwich_sde.scheme.truncation import TruncatedDrift, truncate_drift

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True, eq=False)
class PathRun:
    index: int
    result: SchemeResult
    noise: Optional[SamplePath] = None


@dataclass(frozen=True)
class BatchTask:
    trunc: TruncatedDrift
    spec: NoiseSpec
    grid: TimeGrid
    y0: float
    seed: int
    indices: Tuple[int, ...]
    keep_noise: bool = False
    shift: float = 0.0


def split_batches(indices: Sequence[int], batch_size: int) -> List[Tuple[int, ...]]:
    batch_size = max(1, int(batch_size))
    return [tuple(indices[i : i + batch_size]) for i in range(0, len(indices), batch_size)]


def run_tasks(worker: Callable[[T], R], tasks: Iterable[T], workers: int = 1) -> List[R]:
    """Apply ``worker`` to every task, in a process pool when workers > 1; order is preserved."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(int(workers), len(tasks))) as ex:
        return list(ex.map(worker, tasks))


def run_batch(task: BatchTask) -> List[PathRun]:
    noises = [sample_noise(task.spec, task.grid, RngStream(task.seed, i)) for i in task.indices]
    stacked = np.vstack([noise.values for noise in noises])
    results = run_scheme_batch(task.trunc, task.grid, stacked, task.y0, task.shift)
    return [
        PathRun(i, result, noise if task.keep_noise else None)
        for i, result, noise in zip(task.indices, results, noises)
    ]


def simulate_paths(
    model: DriftModel,
    spec: NoiseSpec,
    grid: TimeGrid,
    level: int,
    y0: float,
    seed: int,
    paths: int,
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
    strict: bool = True,
    keep_noise: bool = False,
    shift: float = 0.0,
) -> List[PathRun]:
    """
    Simulate ``paths`` scheme paths with indices 0..paths-1.

    Args:
        model: Drift model to truncate at ``level``.
        spec: Law of the driving noise.
        grid: Time grid shared by all paths.
        level: Truncation level n.
        y0: Initial value.
        seed: Master seed; path i uses stream (seed, i).
        paths: Number of paths.
        workers: Worker processes. Defaults to ``settings.workers``.
        batch_size: Paths per task. Defaults to ``settings.batch_size``.
        strict: Reject levels below n0.
        keep_noise: Attach each driving noise path to its result.
        shift: Constant added to the truncated drift (−1/n gives the approximating sequence).
    """
    if workers is None or batch_size is None:
        from sandwich_sde.common.config import settings

        workers = settings.workers if workers is None else workers
        batch_size = settings.batch_size if batch_size is None else batch_size
    trunc = truncate_drift(model, level, strict=strict)
    tasks = [
        BatchTask(trunc, spec, grid, y0, seed, indices, keep_noise, shift)
        for indices in split_batches(list(range(paths)), batch_size)
    ]
    logger.info(
        f"Simulating {paths} paths of '{model.name}' (n={level}, N={grid.steps}) in {len(tasks)} batches "
        f"on {workers} worker(s)"
    )
    runs = [run for batch in run_tasks(run_batch, tasks, workers) for run in batch]
    exits = sum(run.result.exited for run in runs)
    if exits:
        logger.warning(f"{exits} of {paths} paths left the band")
    return runs
