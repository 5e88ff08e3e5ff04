"""
Confinement curves φ, ψ and time-dependent coefficients.

The evaluators are small classes rather than closures so that models can be sent to
worker processes.
"""

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ConstantCurve:
    value: float

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(t, dtype=np.float64), self.value)[()]

    def lipschitz(self, horizon: float) -> float:
        return 0.0

    def extrema(self, horizon: float) -> tuple:
        return self.value, self.value


@dataclass(frozen=True)
class CosineCurve:
    """offset + amplitude·cos(frequency·t)"""

    offset: float
    amplitude: float
    frequency: float

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return self.offset + self.amplitude * np.cos(self.frequency * np.asarray(t, dtype=np.float64))[()]

    def lipschitz(self, horizon: float) -> float:
        return abs(self.amplitude * self.frequency)

    def extrema(self, horizon: float) -> tuple:
        values = self(np.linspace(0.0, horizon, 4097))
        lo, hi = float(np.min(values)), float(np.max(values))
        # a full half period inside [0, T] reaches the exact extremes
        if abs(self.frequency) * horizon >= math.pi:
            lo, hi = self.offset - abs(self.amplitude), self.offset + abs(self.amplitude)
        return lo, hi


@dataclass(frozen=True)
class ExponentialCurve:
    """offset + amplitude·exp(rate·t)"""

    offset: float
    amplitude: float
    rate: float

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return self.offset + self.amplitude * np.exp(self.rate * np.asarray(t, dtype=np.float64))[()]

    def lipschitz(self, horizon: float) -> float:
        return abs(self.amplitude * self.rate) * max(1.0, math.exp(self.rate * horizon))

    def extrema(self, horizon: float) -> tuple:
        ends = (float(self(0.0)), float(self(horizon)))
        return min(ends), max(ends)


@dataclass(frozen=True)
class BoundFunction:
    """
    A λ-Hölder curve on [0, T] with constant K: |f(t) − f(s)| ≤ K|t − s|^λ.
    """

    evaluator: Callable[[ArrayLike], ArrayLike]
    order: float
    constant: float
    label: str = ""

    def __post_init__(self):
        if not (0.0 < self.order < 1.0):
            raise InvalidArgumentError(f"Hölder order must lie in (0, 1), got {self.order}")
        if self.constant < 0:
            raise InvalidArgumentError(f"Hölder constant must be nonnegative, got {self.constant}")

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return self.evaluator(t)

    def holder_violations(self, times: np.ndarray, tolerance: float = 1e-9) -> tuple:
        """
        Largest ratio |f(t)−f(s)| / (K|t−s|^λ) over all pairs of ``times`` with its
        witness pair; a ratio above 1 + tolerance is a violation.
        """
        times = np.asarray(times, dtype=np.float64)
        values = np.asarray(self(times), dtype=np.float64)
        worst, witness = 0.0, None
        for lag in range(1, times.shape[0]):
            diff = np.abs(values[lag:] - values[:-lag])
            bound = self.constant * (times[lag:] - times[:-lag]) ** self.order
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(diff > 0, diff / bound, 0.0)
            k = int(np.argmax(ratio))
            if ratio[k] > worst:
                worst, witness = float(ratio[k]), (float(times[k]), float(times[k + lag]))
        return worst, witness


def _holder_constant(curve, order: float, horizon: float) -> float:
    return curve.lipschitz(horizon) * horizon ** (1.0 - order)


def constant_bound(value: float, order: float) -> BoundFunction:
    return BoundFunction(ConstantCurve(float(value)), order, 0.0, f"{value:g}")


def cosine_bound(offset: float, amplitude: float, frequency: float, order: float, horizon: float) -> BoundFunction:
    curve = CosineCurve(float(offset), float(amplitude), float(frequency))
    return BoundFunction(
        curve, order, _holder_constant(curve, order, horizon), f"{offset:g} + {amplitude:g}·cos({frequency:g}t)"
    )


def exponential_bound(offset: float, amplitude: float, rate: float, order: float, horizon: float) -> BoundFunction:
    curve = ExponentialCurve(float(offset), float(amplitude), float(rate))
    return BoundFunction(
        curve, order, _holder_constant(curve, order, horizon), f"{offset:g} + {amplitude:g}·exp({rate:g}t)"
    )
