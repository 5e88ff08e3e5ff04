"""
Built-in drift families and the published simulation models.

Constructors derive the singularity constants (c, γ, y_*) and the moduli c_ε in
closed form, or by a collar scan where no closed form exists.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from sandwich_sde.common.errors import AssumptionViolationError, InvalidArgumentError
from sandwich_sde.drift.bounds import (
    BoundFunction,
    ConstantCurve,
    constant_bound,
    cosine_bound,
    exponential_bound,
)
from sandwich_sde.drift.model import DriftModel

logger = logging.getLogger(__name__)

# collars thinner than this leave no usable room between the bound and the clamp
MIN_COLLAR = 1e-6
# share of the narrowest band width two-sided collars may occupy
COLLAR_SHARE = 0.45
# relative slack between the scanned collar margin and the declared c
SCAN_SLACK = 1e-3
SCAN_TIMES = 257
COLLAR_FRACTIONS = np.concatenate([np.geomspace(1e-6, 1.0, 48), np.linspace(0.05, 1.0, 20)])


@dataclass(frozen=True)
class CevDrift:
    """κ/y^γ − m/y − θy"""

    kappa: float
    theta: float
    gamma: float
    correction: float = 0.0

    def __call__(self, t, y):
        y = np.asarray(y, dtype=np.float64)
        out = self.kappa * y ** (-self.gamma)
        if self.correction:
            out = out - self.correction / y
        return (out - self.theta * y)[()]

    def lipschitz(self, eps: float) -> float:
        return self.kappa * self.gamma * eps ** (-self.gamma - 1.0) + self.correction * eps**-2.0 + self.theta

    def time_holder(self, eps: float) -> float:
        return 0.0


@dataclass(frozen=True)
class AffineTerm:
    """a₃(t, y) = slope·y + intercept"""

    slope: float = 0.0
    intercept: float = 0.0

    def __call__(self, t, y):
        return self.slope * np.asarray(y, dtype=np.float64) + self.intercept


def _as_curve(value):
    return ConstantCurve(float(value)) if isinstance(value, (int, float)) else value


@dataclass(frozen=True)
class PowerDrift:
    """a₁(t)/(y − φ(t))^γ [− a₂(t)/(ψ(t) − y)^γ] − a₃(t, y)"""

    a1: object
    gamma: float
    lower: object
    a3: AffineTerm
    horizon: float
    order: float
    a2: Optional[object] = None
    upper: Optional[object] = None

    def __call__(self, t, y):
        y = np.asarray(y, dtype=np.float64)
        out = self.a1(t) / (y - self.lower(t)) ** self.gamma
        if self.upper is not None:
            out = out - self.a2(t) / (self.upper(t) - y) ** self.gamma
        return (out - self.a3(t, y))[()]

    def lipschitz(self, eps1: float, eps2: Optional[float] = None) -> float:
        value = self.a1.extrema(self.horizon)[1] * self.gamma * eps1 ** (-self.gamma - 1.0) + abs(self.a3.slope)
        if self.upper is not None:
            value += self.a2.extrema(self.horizon)[1] * self.gamma * (eps2 or eps1) ** (-self.gamma - 1.0)
        return value

    def time_holder(self, eps1: float, eps2: Optional[float] = None) -> float:
        h = self.horizon
        rate = self.a1.lipschitz(h) * eps1**-self.gamma + (
            self.a1.extrema(h)[1] * self.gamma * self.lower.lipschitz(h) * eps1 ** (-self.gamma - 1.0)
        )
        if self.upper is not None:
            e2 = eps2 or eps1
            rate += self.a2.lipschitz(h) * e2**-self.gamma + (
                self.a2.extrema(h)[1] * self.gamma * self.upper.lipschitz(h) * e2 ** (-self.gamma - 1.0)
            )
        return rate * h ** (1.0 - self.order)


@dataclass(frozen=True)
class LinearDrift:
    slope: float
    intercept: float = 0.0

    def __call__(self, t, y):
        return (self.slope * np.asarray(y, dtype=np.float64) + self.intercept)[()]

    def lipschitz(self, *eps: float) -> float:
        return abs(self.slope)

    def time_holder(self, *eps: float) -> float:
        return 0.0


def _check_order(order: float) -> None:
    if not (0.0 < order < 1.0):
        raise InvalidArgumentError(f"noise Hölder order must lie in (0, 1), got {order}")


def cir_cev_drift(
    kappa: float,
    theta: float,
    alpha: float,
    order: float,
    horizon: float = 1.0,
    y_star: Optional[float] = None,
) -> DriftModel:
    """
    b(y) = κ/y^{α/(1−α)} − θy with φ ≡ 0, the drift of Y = X^{1−α} for a CIR (α = ½)
    or CEV (α ∈ (½, 1)) process X driven by λ-Hölder noise.

    Raises:
        AssumptionViolationError: (A4) when α + λ ≤ 1.
    """
    _check_order(order)
    if kappa <= 0 or theta <= 0:
        raise InvalidArgumentError(f"κ and θ must be positive, got κ={kappa}, θ={theta}")
    if not (0.5 <= alpha < 1.0):
        raise InvalidArgumentError(f"α must lie in [½, 1), got {alpha}")
    if alpha + order <= 1.0:
        raise AssumptionViolationError("A4", f"α + λ = {alpha + order:g} must exceed 1")

    gamma = alpha / (1.0 - alpha)
    if y_star is None:
        y_star = min(1.0, (kappa / (2.0 * theta)) ** (1.0 / (gamma + 1.0)))
    c = kappa - theta * y_star ** (gamma + 1.0)
    if c <= 0:
        raise AssumptionViolationError("A3", f"κ − θ·y*^(γ+1) = {c:g} is not positive for y* = {y_star:g}")

    drift = CevDrift(kappa, theta, gamma)
    return DriftModel(
        name=f"cir_cev(κ={kappa:g}, θ={theta:g}, α={alpha:g})",
        horizon=horizon,
        drift=drift,
        lower=constant_bound(0.0, order),
        upper=None,
        c=c,
        gamma=gamma,
        y_star=y_star,
        order=order,
        lipschitz_modulus=drift.lipschitz,
        time_holder_modulus=drift.time_holder,
    )


def mixed_cev_drift(
    kappa: float,
    theta: float,
    nu1: float,
    alpha: float,
    order: float,
    horizon: float = 1.0,
    y_star: Optional[float] = None,
) -> DriftModel:
    """
    b(y) = κ/y^{α/(1−α)} − αν₁²/(2(1−α)y) − θy, the transformed CEV drift under mixed
    noise ν₁B + ν₂B^H. The Itô correction from the Brownian part enters as the middle
    term; γ = α/(1−α) > 1 keeps the singular term dominant at 0.

    Raises:
        AssumptionViolationError: (A3) when the middle term leaves no positive collar.
    """
    _check_order(order)
    if kappa <= 0 or theta <= 0 or nu1 < 0:
        raise InvalidArgumentError(f"need κ, θ > 0 and ν₁ ≥ 0, got κ={kappa}, θ={theta}, ν₁={nu1}")
    if not (0.5 < alpha < 1.0):
        raise InvalidArgumentError(f"α must lie in (½, 1), got {alpha}")
    if alpha + order <= 1.0:
        raise AssumptionViolationError("A4", f"α + λ = {alpha + order:g} must exceed 1")

    gamma = alpha / (1.0 - alpha)
    correction = alpha * nu1**2 / (2.0 * (1.0 - alpha))
    if y_star is None:
        y_star = min(1.0, (kappa / (2.0 * theta)) ** (1.0 / (gamma + 1.0)))
        if correction > 0:
            y_star = min(y_star, (kappa / (2.0 * correction)) ** (1.0 / (gamma - 1.0)))
        if y_star < MIN_COLLAR:
            raise AssumptionViolationError(
                "A3", f"middle term dominates: largest collar with positive drift is {y_star:.3g} < {MIN_COLLAR:g}"
            )
    # b(y)·y^γ is decreasing on (0, y*], so its value at y* is the collar minimum
    c = kappa - correction * y_star ** (gamma - 1.0) - theta * y_star ** (gamma + 1.0)
    if c <= 0:
        raise AssumptionViolationError("A3", f"b(y)·y^γ falls to {c:g} ≤ 0 on (0, {y_star:g}]")

    drift = CevDrift(kappa, theta, gamma, correction)
    return DriftModel(
        name=f"mixed_cev(κ={kappa:g}, θ={theta:g}, ν₁={nu1:g}, α={alpha:g})",
        horizon=horizon,
        drift=drift,
        lower=constant_bound(0.0, order),
        upper=None,
        c=c,
        gamma=gamma,
        y_star=y_star,
        order=order,
        lipschitz_modulus=drift.lipschitz,
        time_holder_modulus=drift.time_holder,
    )


def collar_margin(drift, lower, upper, y_star: float, horizon: float, times: int = SCAN_TIMES) -> float:
    """
    Scanned minimum of b(t, φ+η)·η^γ (and −b(t, ψ−η)·η^γ two-sided) over the collars
    0 < η ≤ y_*; this is the largest c the (A3)/(B3) inequality admits on the scan.
    """
    t = np.linspace(0.0, horizon, times)[:, None]
    eta = y_star * COLLAR_FRACTIONS[None, :]
    margin = np.min(drift(t, lower(t) + eta) * eta**drift.gamma)
    if upper is not None:
        margin = min(margin, np.min(-drift(t, upper(t) - eta) * eta**drift.gamma))
    return float(margin)


def _to_affine(a3: Union[AffineTerm, float, None]) -> AffineTerm:
    if a3 is None:
        return AffineTerm()
    if isinstance(a3, (int, float)):
        return AffineTerm(0.0, float(a3))
    return a3


def two_sided_power_drift(
    a1,
    a2,
    a3: Union[AffineTerm, float, None],
    gamma: float,
    lower: BoundFunction,
    upper: BoundFunction,
    order: float,
    horizon: float = 1.0,
    y_star: Optional[float] = None,
    name: str = "two_sided_power",
) -> DriftModel:
    """
    b(t, y) = a₁(t)/(y − φ(t))^γ − a₂(t)/(ψ(t) − y)^γ − a₃(t, y).

    ``a1``/``a2`` are positive numbers or curve evaluators, ``a3`` an ``AffineTerm``.
    Without an explicit ``y_star`` the collar is the widest one (at most 45% of the
    narrowest band width) on which the scanned margin keeps half of min(inf a₁, inf a₂).

    Raises:
        AssumptionViolationError: (B-domain) if φ ≥ ψ somewhere; (B3) if no collar of
            width ≥ 1e-6 keeps the singular terms dominant.
    """
    _check_order(order)
    a1, a2, a3 = _as_curve(a1), _as_curve(a2), _to_affine(a3)
    a1_min, a2_min = a1.extrema(horizon)[0], a2.extrema(horizon)[0]
    if a1_min <= 0 or a2_min <= 0:
        raise InvalidArgumentError(f"a₁ and a₂ must be positive, got inf a₁={a1_min:g}, inf a₂={a2_min:g}")

    t = np.linspace(0.0, horizon, 4097)
    width = np.asarray(upper(t)) - np.asarray(lower(t))
    if np.any(width <= 0):
        k = int(np.argmin(width))
        raise AssumptionViolationError("B-domain", f"φ(t) ≥ ψ(t) at t = {t[k]:g}")

    drift = PowerDrift(a1, gamma, lower.evaluator, a3, horizon, order, a2, upper.evaluator)
    widest = COLLAR_SHARE * float(width.min())
    if y_star is None:
        target = 0.5 * min(a1_min, a2_min)

        def margin(y):
            return collar_margin(drift, lower, upper, y, horizon)

        if margin(widest) >= target:
            y_star = widest
        elif widest <= MIN_COLLAR or margin(MIN_COLLAR) < target:
            raise AssumptionViolationError("B3", "a₃ dominates the singular terms on every collar ≥ 1e-6")
        else:
            lo, hi = math.log(MIN_COLLAR), math.log(widest)
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if margin(math.exp(mid)) >= target:
                    lo = mid
                else:
                    hi = mid
            y_star = math.exp(lo)
    elif y_star >= 0.5 * float(width.max()):
        raise AssumptionViolationError("B3", f"y* = {y_star:g} must be below half the widest band")

    c = collar_margin(drift, lower, upper, y_star, horizon) * (1.0 - SCAN_SLACK)
    if c <= 0:
        raise AssumptionViolationError("B3", f"collar margin {c:g} is not positive for y* = {y_star:g}")
    logger.debug(f"{name}: y*={y_star:.6g}, c={c:.6g}")

    return DriftModel(
        name=name,
        horizon=horizon,
        drift=drift,
        lower=lower,
        upper=upper,
        c=c,
        gamma=gamma,
        y_star=y_star,
        order=order,
        lipschitz_modulus=drift.lipschitz,
        time_holder_modulus=drift.time_holder,
    )


def one_sided_power_drift(
    a1,
    gamma: float,
    lower: BoundFunction,
    order: float,
    c: float,
    y_star: float,
    a3: Union[AffineTerm, float, None] = None,
    horizon: float = 1.0,
    name: str = "custom",
) -> DriftModel:
    """
    b(t, y) = a₁(t)/(y − φ(t))^γ − a₃(t, y) with user-declared c and y_*.

    Nothing beyond positivity is checked here; ``validate_assumptions`` reports whether
    the declared constants actually hold.
    """
    drift = PowerDrift(_as_curve(a1), gamma, lower.evaluator, _to_affine(a3), horizon, order)
    return DriftModel(
        name=name,
        horizon=horizon,
        drift=drift,
        lower=lower,
        upper=None,
        c=c,
        gamma=gamma,
        y_star=y_star,
        order=order,
        lipschitz_modulus=drift.lipschitz,
        time_holder_modulus=drift.time_holder,
    )


def linear_drift(slope: float, intercept: float = 0.0, order: float = 0.5, horizon: float = 1.0) -> DriftModel:
    """Regular baseline b(y) = slope·y + intercept; no bound, no truncation."""
    drift = LinearDrift(slope, intercept)
    return DriftModel(
        name=f"linear(slope={slope:g}, intercept={intercept:g})",
        horizon=horizon,
        drift=drift,
        lower=constant_bound(-math.inf, order),
        upper=None,
        c=0.0,
        gamma=0.0,
        y_star=0.0,
        order=order,
        lipschitz_modulus=drift.lipschitz,
        time_holder_modulus=drift.time_holder,
        singular=False,
    )


def zero_drift(order: float = 0.5, horizon: float = 1.0) -> DriftModel:
    return linear_drift(0.0, 0.0, order, horizon)


def simulation_one_model(order: float = 0.65, horizon: float = 1.0) -> DriftModel:
    """fCIR ½(κ/Y − θY) with κ=3, θ=1, i.e. cir_cev_drift(1.5, 0.5, ½)."""
    return cir_cev_drift(1.5, 0.5, 0.5, order, horizon)


def simulation_two_model(order: float = 0.65, horizon: float = 1.0) -> DriftModel:
    """1/(y − cos 5t)^4 − 1/(3 + cos 5t − y)^4"""
    return two_sided_power_drift(
        1.0,
        1.0,
        None,
        4.0,
        cosine_bound(0.0, 1.0, 5.0, order, horizon),
        cosine_bound(3.0, 1.0, 5.0, order, horizon),
        order,
        horizon,
        name="cosine_band",
    )


def simulation_three_model(order: float = 0.65, horizon: float = 1.0) -> DriftModel:
    """1/(y + e^{−t})^4 − 1/(e^{−t} − y)^4"""
    return two_sided_power_drift(
        1.0,
        1.0,
        None,
        4.0,
        exponential_bound(0.0, -1.0, -1.0, order, horizon),
        exponential_bound(0.0, 1.0, -1.0, order, horizon),
        order,
        horizon,
        name="shrinking_band",
    )
