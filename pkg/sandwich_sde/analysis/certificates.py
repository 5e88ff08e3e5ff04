"""
Pathwise a-priori bounds rendered as per-node certificates.

A lower (or two-sided sandwich) certificate keeps the solution at distance
L·Λ̃^{−1/(γλ+λ−1)} from its bounds; an upper certificate caps |Y_t| by M₁ + M₂Λ.
Both are exact for the continuum solution, so violations measured on scheme paths
are discretization slack.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from sandwich_sde.analysis.constants import (
    adjusted_holder_constant,
    beta_constant,
    exponent_denominator,
    lower_bound_scale,
)
from sandwich_sde.analysis.holder import HolderEstimate, estimate_holder
from sandwich_sde.analysis.report import StudyReport
from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.path import SamplePath
from sandwich_sde.drift.model import DriftModel
from sandwich_sde.noise.sampling import NoiseSpec
from sandwich_sde.scheme.montecarlo import BatchTask, run_batch, run_tasks, split_batches
from sandwich_sde.scheme.truncation import truncate_drift

logger = logging.getLogger(__name__)

DEFAULT_ORDER_MARGIN = 0.05


class CertificateKind(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    SANDWICH = "sandwich"


@dataclass(frozen=True)
class CertificateCheck:
    violations: int
    nodes: int
    worst_margin: float

    @property
    def fraction(self) -> float:
        return self.violations / self.nodes


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """
    Per-node bound values on ``grid``.

    For ``lower``/``sandwich`` certificates ``lower`` (and ``upper``) bound Y_t itself;
    an ``upper`` certificate bounds |Y_t| by ``upper``.
    """

    kind: CertificateKind
    constants: Dict[str, float]
    grid: TimeGrid
    lower: Optional[np.ndarray]
    upper: Optional[np.ndarray]

    def check(self, path: SamplePath) -> CertificateCheck:
        """Count nodes where ``path`` breaks the certificate; worst_margin is the largest excess (0 if none)."""
        if path.grid != self.grid:
            raise InvalidArgumentError("path and certificate live on different grids")
        values = path.values
        if self.kind == CertificateKind.UPPER:
            excess = np.abs(values) - self.upper
        else:
            excess = self.lower - values
            if self.upper is not None:
                excess = np.maximum(excess, values - self.upper)
        violations = int(np.count_nonzero(excess > 0))
        worst = float(max(np.max(excess), 0.0))
        return CertificateCheck(violations, values.shape[0], worst)


def lower_bound_gap(model: DriftModel, order: float, adjusted: float) -> float:
    """L·Λ̃^{−1/(γλ+λ−1)}"""
    if adjusted <= 0:
        raise InvalidArgumentError(f"adjusted Hölder constant must be positive, got {adjusted}")
    d = exponent_denominator(order, model.gamma, "B4" if model.two_sided else "A4")
    return lower_bound_scale(order, model.gamma, model.c, model.sidedness) * adjusted ** (-1.0 / d)


def lower_bound_certificate(
    model: DriftModel, estimate: HolderEstimate, y0: float, use: str = "max_ratio"
) -> BoundCertificate:
    """
    φ(t) + L·Λ̃^{−1/(γλ+λ−1)} ≤ Y_t, and Y_t ≤ ψ(t) − L·Λ̃^{−1/(γλ+λ−1)} for two-sided
    models, at the order of ``estimate``.

    Λ̃ is taken from ``estimate.adjusted`` when present, otherwise assembled from the
    ``use`` constant of the estimate.

    Raises:
        AssumptionViolationError: (A4)/(B4) when γλ + λ − 1 ≤ 0.
        InvalidArgumentError: For regular models.
    """
    if not model.singular:
        raise InvalidArgumentError(f"model '{model.name}' has no singular bound to certify")
    order = estimate.order
    adjusted = estimate.adjusted
    if adjusted is None:
        adjusted = adjusted_holder_constant(model, estimate.constant(use), y0, order)
    gap = lower_bound_gap(model, order, adjusted)
    t = estimate.grid.nodes
    scale = lower_bound_scale(order, model.gamma, model.c, model.sidedness)
    constants = {
        "order": order,
        "beta": beta_constant(order, model.gamma, model.c, model.sidedness),
        "L": scale,
        "M3": 1.0 / scale,
        "adjusted_holder": adjusted,
        "gap": gap,
    }
    lower = np.asarray(model.phi(t), dtype=np.float64) + gap
    upper = None
    kind = CertificateKind.LOWER
    if model.two_sided:
        upper = np.asarray(model.psi(t), dtype=np.float64) - gap
        kind = CertificateKind.SANDWICH
    lower = np.broadcast_to(lower, t.shape).copy()
    return BoundCertificate(kind, constants, estimate.grid, lower, upper)


@dataclass(frozen=True)
class UpperBoundConstants:
    r: float
    eta: float
    a_t: float
    m1: float
    m2: float


def upper_bound_constants(
    model: DriftModel, y0: float, r: float = 1.0, order: Optional[float] = None, resolution: int = 1024
) -> UpperBoundConstants:
    """
    M₁(r, T) and M₂(r, T) of |Y_t|^r ≤ M₁ + M₂Λ^r, with the suprema over [0, T] taken on
    ``resolution`` + 1 scan times.

    η = (Y₀ − φ(0))/2, A_T = c_η(1 + max|φ| + η) + max_u |b(u, φ(u) + η)|,
    M₁(1) = (|Y₀| + T·A_T + max|φ| + η)·e^{T·A_T}, M₂(1) = T^λ·e^{T·A_T} and
    M_i(r) = 2^{(r−1)∨0}·M_i(1)^r.
    """
    if r <= 0:
        raise InvalidArgumentError(f"moment order r must be positive, got {r}")
    if model.two_sided:
        raise InvalidArgumentError("upper-bound constants are defined for one-sided models")
    if not model.singular:
        raise InvalidArgumentError(f"model '{model.name}' has no lower bound")
    order = model.order if order is None else order
    horizon = model.horizon
    eta = (y0 - float(model.phi(0.0))) / 2.0
    if eta <= 0:
        raise InvalidArgumentError(f"initial value {y0} must lie above φ(0)")
    t = np.linspace(0.0, horizon, resolution + 1)
    phi = np.broadcast_to(np.asarray(model.phi(t), dtype=np.float64), t.shape)
    phi_max = float(np.max(np.abs(phi)))
    drift_max = float(np.max(np.abs(model.raw(t, phi + eta))))
    a_t = model.lipschitz(eta) * (1.0 + phi_max + eta) + drift_max
    growth = math.exp(horizon * a_t) if horizon * a_t < 700 else math.inf
    m1 = (abs(y0) + horizon * a_t + phi_max + eta) * growth
    m2 = horizon**order * growth
    factor = 2.0 ** max(r - 1.0, 0.0)
    return UpperBoundConstants(r, eta, a_t, factor * m1**r, factor * m2**r)


def upper_bound_certificate(
    model: DriftModel, estimate: HolderEstimate, y0: float, use: str = "max_ratio", resolution: int = 1024
) -> BoundCertificate:
    """|Y_t| ≤ M₁(1, T) + M₂(1, T)·Λ at every node."""
    constants = upper_bound_constants(model, y0, 1.0, estimate.order, resolution)
    holder = estimate.constant(use)
    bound = constants.m1 + constants.m2 * holder
    return BoundCertificate(
        CertificateKind.UPPER,
        {"order": estimate.order, "M1": constants.m1, "M2": constants.m2, "A_T": constants.a_t, "holder": holder},
        estimate.grid,
        None,
        np.full(estimate.grid.steps + 1, bound),
    )


def default_grr_exponent(order: float) -> float:
    """Smallest p ≥ 4 (an integer) with λ + 1/p < 1."""
    return float(max(4, math.floor(1.0 / (1.0 - order)) + 1))


@dataclass(frozen=True)
class CertificateTask:
    batch: BatchTask
    model: DriftModel
    order: float
    p: float


def certify_batch(task: CertificateTask) -> List[dict]:
    rows = []
    for run in run_batch(task.batch):
        estimate = estimate_holder(run.noise, task.order, task.p, task.model, task.batch.y0)
        certificate = lower_bound_certificate(task.model, estimate, task.batch.y0)
        checked = certificate.check(run.result.path)
        rows.append(
            {
                "index": run.index,
                "holder": estimate.max_ratio,
                "adjusted_holder": estimate.adjusted,
                "gap": certificate.constants["gap"],
                "violations": checked.violations,
                "worst_margin": checked.worst_margin,
                "nodes": checked.nodes,
            }
        )
    return rows


def certificate_study(
    model: DriftModel,
    spec: NoiseSpec,
    grid: TimeGrid,
    level: int,
    y0: float,
    paths: int,
    seed: int,
    order: Optional[float] = None,
    p: Optional[float] = None,
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
    strict: bool = True,
    max_fraction: float = 0.01,
    max_margin: float = 1e-3,
) -> StudyReport:
    """
    Check the lower (or sandwich) certificate on simulated scheme paths, each with Λ̃
    built from its own driving noise path at order λ (default: noise Hölder limit − 0.05).

    Passes when at most ``max_fraction`` of all nodes violate their certificate and no
    violation exceeds ``max_margin``.
    """
    if paths < 1:
        raise InvalidArgumentError(f"need at least one path, got {paths}")
    if order is None:
        order = spec.holder_limit - DEFAULT_ORDER_MARGIN
    if not (0.0 < order < 1.0):
        raise InvalidArgumentError(f"certificate order must lie in (0, 1), got {order}")
    p = default_grr_exponent(order) if p is None else p
    if workers is None or batch_size is None:
        from sandwich_sde.common.config import settings

        workers = settings.workers if workers is None else workers
        batch_size = settings.batch_size if batch_size is None else batch_size

    trunc = truncate_drift(model, level, strict=strict)
    tasks = [
        CertificateTask(BatchTask(trunc, spec, grid, y0, seed, indices, keep_noise=True), model, order, p)
        for indices in split_batches(list(range(paths)), batch_size)
    ]
    logger.info(f"Certificate study on '{model.name}': {paths} paths, n={level}, N={grid.steps}, λ={order:g}")
    rows = [row for batch in run_tasks(certify_batch, tasks, workers) for row in batch]

    violations = sum(row["violations"] for row in rows)
    nodes = sum(row["nodes"] for row in rows)
    fraction = violations / nodes
    worst = max(row["worst_margin"] for row in rows)
    passed = fraction <= max_fraction and worst <= max_margin
    logger.info(f"Certificate violations at {violations} of {nodes} nodes, worst margin {worst:.3g}")
    return StudyReport(
        kind="certificate",
        parameters={
            "model": model.name,
            "level": level,
            "steps": grid.steps,
            "horizon": grid.horizon,
            "initial": y0,
            "paths": paths,
            "seed": seed,
            "order": order,
            "p": p,
            "max_fraction": max_fraction,
            "max_margin": max_margin,
        },
        metrics={
            "violation_fraction": fraction,
            "worst_margin": worst,
            "violations": [row["violations"] for row in rows],
            "path_worst_margin": [row["worst_margin"] for row in rows],
            "adjusted_holder": [row["adjusted_holder"] for row in rows],
            "gap": [row["gap"] for row in rows],
        },
        expected=max_fraction,
        passed=passed,
    )
