import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from sandwich_sde.common.errors import DomainError, InvalidArgumentError
from sandwich_sde.drift.bounds import BoundFunction

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class Sidedness(str, Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class DriftModel:
    """
    Drift b(t, y) with its confinement curves and singularity constants.

    One-sided models live on D₀ = {y > φ(t)} and satisfy b ≥ c/(y − φ)^γ on the collar
    y − φ ≤ y_*. Two-sided models live on D₀,₀ = {φ(t) < y < ψ(t)} and additionally
    satisfy b ≤ −c/(ψ − y)^γ on the upper collar.

    ``lipschitz_modulus(ε₁, ε₂)`` bounds |∂_y b| on D_{ε₁} (resp. D_{ε₁,ε₂});
    ``time_holder_modulus(ε₁, ε₂)`` is the matching λ-Hölder constant in t.
    ``singular=False`` marks regular baselines (no collar, truncation is the identity,
    assumption validation is bypassed).
    """

    name: str
    horizon: float
    drift: Callable[[ArrayLike, ArrayLike], ArrayLike]
    lower: BoundFunction
    upper: Optional[BoundFunction]
    c: float
    gamma: float
    y_star: float
    order: float
    lipschitz_modulus: Callable[..., float]
    time_holder_modulus: Callable[..., float]
    singular: bool = True

    def __post_init__(self):
        if self.horizon <= 0:
            raise InvalidArgumentError(f"horizon must be positive, got {self.horizon}")
        if not (0.0 < self.order < 1.0):
            raise InvalidArgumentError(f"Hölder order must lie in (0, 1), got {self.order}")
        if self.singular and (self.c <= 0 or self.gamma <= 0 or self.y_star <= 0):
            raise InvalidArgumentError(
                f"singularity constants must be positive, got c={self.c}, γ={self.gamma}, y*={self.y_star}"
            )

    @property
    def sidedness(self) -> Sidedness:
        return Sidedness.ONE_SIDED if self.upper is None else Sidedness.TWO_SIDED

    @property
    def two_sided(self) -> bool:
        return self.upper is not None

    @property
    def holder_constant(self) -> float:
        """K covering φ and ψ jointly."""
        return self.lower.constant + (self.upper.constant if self.upper is not None else 0.0)

    def exponent_margin(self, order: Optional[float] = None) -> float:
        """γλ + λ − 1, positive exactly when γ > (1 − λ)/λ."""
        lam = self.order if order is None else order
        return self.gamma * lam + lam - 1.0

    def phi(self, t: ArrayLike) -> ArrayLike:
        return self.lower(t)

    def psi(self, t: ArrayLike) -> ArrayLike:
        if self.upper is None:
            return np.full_like(np.asarray(t, dtype=np.float64), math.inf)[()]
        return self.upper(t)

    def contains(self, t: ArrayLike, y: ArrayLike) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        inside = y > self.phi(t)
        if self.upper is not None:
            inside &= y < self.psi(t)
        return inside

    def raw(self, t: ArrayLike, y: ArrayLike) -> ArrayLike:
        """b(t, y) without the domain check; callers guarantee y lies inside the band."""
        return self.drift(t, y)

    def evaluate(self, t: ArrayLike, y: ArrayLike) -> ArrayLike:
        """
        b(t, y) on the open domain.

        Raises:
            DomainError: If some y lies on or beyond a bound.
        """
        inside = np.broadcast_to(self.contains(t, y), np.broadcast(np.asarray(t), np.asarray(y)).shape)
        if not np.all(inside):
            k = int(np.flatnonzero(~inside.ravel())[0]) if inside.ndim else None
            raise DomainError(f"drift of '{self.name}' evaluated on or outside its confinement bounds", index=k)
        return self.drift(t, y)

    def lipschitz(self, eps1: float, eps2: Optional[float] = None) -> float:
        if self.two_sided:
            return self.lipschitz_modulus(eps1, eps1 if eps2 is None else eps2)
        return self.lipschitz_modulus(eps1)

    def time_holder(self, eps1: float, eps2: Optional[float] = None) -> float:
        if self.two_sided:
            return self.time_holder_modulus(eps1, eps1 if eps2 is None else eps2)
        return self.time_holder_modulus(eps1)
