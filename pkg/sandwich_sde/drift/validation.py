"""
Sampling-based checks of the structural assumptions on a drift model.

Every check draws finitely many points from the relevant domain and reports the worst
witness it saw. A pass means no violation was found among the samples, never that the
assumption holds everywhere.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.rng import RngStream
from sandwich_sde.drift.model import DriftModel

logger = logging.getLogger(__name__)

RELATIVE_TOLERANCE = 1e-9
ABSOLUTE_TOLERANCE = 1e-12
VALIDATION_SEED = 0x5A4D


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    worst: float
    witness: Optional[Tuple[float, ...]]
    detail: str
    samples: int = 0


@dataclass(frozen=True)
class ValidationReport:
    model: str
    sidedness: str
    order: float
    checks: List[AssumptionCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def check(self, name: str) -> AssumptionCheck:
        for entry in self.checks:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "sidedness": self.sidedness,
            "order": self.order,
            "passed": self.passed,
            "failures": self.failures,
            "checks": self.checks,
        }


def _cell_times(grid: TimeGrid, per_cell: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform draws inside every grid cell, plus the cell width each draw belongs to."""
    left = np.repeat(grid.nodes[:-1], per_cell)
    u = rng.random(left.shape[0])
    return left + u * grid.mesh, np.full(left.shape[0], grid.mesh)


def _worst(ratio: np.ndarray, *coords: np.ndarray) -> Tuple[float, Optional[Tuple[float, ...]]]:
    if ratio.size == 0:
        return 0.0, None
    k = int(np.argmax(ratio))
    return float(ratio[k]), tuple(float(c[k]) for c in coords)


def _check_bounds(model: DriftModel, grid: TimeGrid) -> AssumptionCheck:
    t = grid.nodes
    phi = np.asarray(model.phi(t), dtype=np.float64)
    psi = np.asarray(model.psi(t), dtype=np.float64) if model.two_sided else np.zeros_like(phi)
    K = model.holder_constant
    worst, witness = 0.0, None
    for lag in range(1, t.shape[0]):
        diff = np.abs(phi[lag:] - phi[:-lag]) + np.abs(psi[lag:] - psi[:-lag])
        allowed = K * (t[lag:] - t[:-lag]) ** model.order
        excess = diff - allowed * (1.0 + RELATIVE_TOLERANCE) - ABSOLUTE_TOLERANCE
        k = int(np.argmax(excess))
        if excess[k] > worst or witness is None:
            worst, witness = float(excess[k]), (float(t[k]), float(t[k + lag]))
    return AssumptionCheck(
        "bounds",
        worst <= 0.0,
        worst,
        witness,
        f"|Δφ| + |Δψ| ≤ K|Δt|^λ with K = {K:.6g} on grid pairs",
        t.shape[0] * (t.shape[0] - 1) // 2,
    )


def _check_band(model: DriftModel, grid: TimeGrid) -> AssumptionCheck:
    t = grid.nodes
    width = np.asarray(model.psi(t)) - np.asarray(model.phi(t))
    k = int(np.argmin(width))
    half_sup = 0.5 * float(width.max())
    ok = bool(width[k] > 0) and model.y_star < half_sup
    return AssumptionCheck(
        "B-domain",
        ok,
        float(width[k]),
        (float(t[k]),),
        f"φ < ψ at every node (min width {width[k]:.6g}) and y* = {model.y_star:.6g} < ½ sup|ψ − φ| = {half_sup:.6g}",
        t.shape[0],
    )


def _check_continuity(model, label, t, y) -> AssumptionCheck:
    values = np.asarray(model.raw(t, y), dtype=np.float64)
    bad = ~np.isfinite(values)
    witness = (float(t[bad][0]), float(y[bad][0])) if bad.any() else None
    return AssumptionCheck(
        label, not bad.any(), float(bad.sum()), witness, "b is finite at sampled interior points", values.size
    )


def _sample_interior(model: DriftModel, t: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    phi = np.asarray(model.phi(t))
    if model.two_sided:
        psi = np.asarray(model.psi(t))
        return phi + (psi - phi) * rng.uniform(1e-6, 1 - 1e-6, t.shape[0])
    return phi + model.y_star * 10.0 ** rng.uniform(-6.0, 1.0, t.shape[0])


def _check_lipschitz(model: DriftModel, label: str, t: np.ndarray, rng: np.random.Generator) -> AssumptionCheck:
    phi = np.asarray(model.phi(t))
    worst, witness, count = -np.inf, None, 0
    for eps in (0.25 * model.y_star, 0.5 * model.y_star, model.y_star):
        lo = phi + eps
        if model.two_sided:
            hi = np.asarray(model.psi(t)) - eps
            keep = hi > lo
        else:
            hi = lo + 4.0 * model.y_star
            keep = np.ones_like(lo, dtype=bool)
        tt, lo, hi = t[keep], lo[keep], hi[keep]
        y1 = lo + (hi - lo) * rng.random(tt.shape[0])
        y2 = lo + (hi - lo) * rng.random(tt.shape[0])
        modulus = model.lipschitz(eps)
        diff = np.abs(model.raw(tt, y1) - model.raw(tt, y2))
        allowed = modulus * np.abs(y1 - y2) * (1.0 + RELATIVE_TOLERANCE) + ABSOLUTE_TOLERANCE
        ratio, where = _worst(diff / allowed, tt, y1, y2)
        if ratio > worst:
            worst, witness = ratio, where
        count += tt.shape[0]
    return AssumptionCheck(
        label, worst <= 1.0, float(worst), witness, "|b(t,y₁) − b(t,y₂)| ≤ c_ε|y₁ − y₂| on D_ε (ratio shown)", count
    )


def _check_collar(model: DriftModel, label: str, t: np.ndarray, rng: np.random.Generator) -> AssumptionCheck:
    eta = model.y_star * 10.0 ** rng.uniform(-6.0, 0.0, t.shape[0])
    lower = model.raw(t, np.asarray(model.phi(t)) + eta) * eta**model.gamma
    ratios = [(1.0 - lower / model.c, eta)]
    detail = "b ≥ c/(y − φ)^γ on the lower collar"
    if model.two_sided:
        upper = -model.raw(t, np.asarray(model.psi(t)) - eta) * eta**model.gamma
        ratios.append((1.0 - upper / model.c, -eta))
        detail += " and b ≤ −c/(ψ − y)^γ on the upper collar"
    worst, witness = -np.inf, None
    for shortfall, signed_eta in ratios:
        value, where = _worst(shortfall, t, signed_eta)
        if value > worst:
            worst, witness = value, where
    return AssumptionCheck(label, worst <= RELATIVE_TOLERANCE, float(worst), witness, detail, t.shape[0] * len(ratios))


def _check_exponent(model: DriftModel, label: str) -> AssumptionCheck:
    lam = model.order
    threshold = (1.0 - lam) / lam
    return AssumptionCheck(
        label,
        model.gamma > threshold,
        model.gamma - threshold,
        None,
        f"γ = {model.gamma:.6g} > (1 − λ)/λ = {threshold:.6g}",
        1,
    )


def _check_time_holder(
    model: DriftModel, label: str, t: np.ndarray, cell: np.ndarray, rng: np.random.Generator
) -> AssumptionCheck:
    s = np.minimum(t + cell * rng.random(t.shape[0]), model.horizon)
    eps = 0.5 * model.y_star
    spread = model.holder_constant * np.abs(s - t) ** model.order
    lo = np.maximum(model.phi(t), model.phi(s)) + eps + spread
    if model.two_sided:
        hi = np.minimum(model.psi(t), model.psi(s)) - eps - spread
    else:
        hi = lo + 4.0 * model.y_star
    keep = (hi > lo) & (s > t)
    t, s, lo, hi = t[keep], s[keep], lo[keep], hi[keep]
    y = lo + (hi - lo) * rng.random(t.shape[0])
    diff = np.abs(model.raw(t, y) - model.raw(s, y))
    allowed = model.time_holder(eps) * (s - t) ** model.order * (1.0 + RELATIVE_TOLERANCE) + ABSOLUTE_TOLERANCE
    worst, witness = _worst(diff / allowed, t, s, y)
    return AssumptionCheck(
        label, worst <= 1.0, worst, witness, "|b(t,y) − b(s,y)| ≤ c_ε|t − s|^λ on D_ε (ratio shown)", t.shape[0]
    )


def validate_assumptions(model: DriftModel, grid: TimeGrid, samples_per_cell: int = 8) -> ValidationReport:
    """
    Check the structural assumptions of ``model`` by sampling.

    One-sided models are checked against (A1)-(A5), two-sided ones against (B1)-(B5)
    plus the band geometry ("B-domain"). The Hölder condition on the bounds is
    reported as "bounds". Regular models (``singular=False``) bypass validation.
    """
    if samples_per_cell < 1:
        raise InvalidArgumentError(f"samples_per_cell must be >= 1, got {samples_per_cell}")
    if grid.horizon != model.horizon:
        raise InvalidArgumentError(f"grid horizon {grid.horizon} differs from model horizon {model.horizon}")

    report = ValidationReport(model.name, model.sidedness.value, model.order)
    if not model.singular:
        report.checks.append(AssumptionCheck("regular", True, 0.0, None, "no singularity; validation bypassed"))
        return report

    prefix = "B" if model.two_sided else "A"
    rng = RngStream(VALIDATION_SEED, 0).generator()
    t, cell = _cell_times(grid, samples_per_cell, rng)

    report.checks.append(_check_bounds(model, grid))
    if model.two_sided:
        report.checks.append(_check_band(model, grid))
        if not report.checks[-1].passed:
            logger.warning(f"{model.name}: band geometry fails, skipping sampled checks")
            report.checks.append(_check_exponent(model, f"{prefix}4"))
            return report
    with np.errstate(all="ignore"):
        report.checks.append(_check_continuity(model, f"{prefix}1", t, _sample_interior(model, t, rng)))
        report.checks.append(_check_lipschitz(model, f"{prefix}2", t, rng))
        report.checks.append(_check_collar(model, f"{prefix}3", t, rng))
        report.checks.append(_check_exponent(model, f"{prefix}4"))
        report.checks.append(_check_time_holder(model, f"{prefix}5", t, cell, rng))

    for check in report.checks:
        log = logger.info if check.passed else logger.warning
        log(f"{model.name}: ({check.name}) {'pass' if check.passed else 'FAIL'} worst={check.worst:.4g}")
    return report
