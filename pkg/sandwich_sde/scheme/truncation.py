"""
Globally Lipschitz truncation b̃ₙ of a singular drift.

Near φ the drift is replaced by the constant n once it would exceed n (and by −n near
ψ for two-sided models). Pointwise, with η_n(t) the collar root b(t, φ(t) + η) = n,

    b̃ₙ(t, y) = n                 for y ≤ φ(t) + η_n(t)
               −n                for y ≥ ψ(t) − η^ψ_n(t)   (two-sided)
               b(t, y)           otherwise,

which is the set definition over G_n ∪ D_{y_*} whenever b is monotone in y on the
collars. Collar roots are found by vectorised bisection to an absolute tolerance of
1e-12. Node tables are cached for the most recent MAX_NODE_TABLES grids.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from sandwich_sde.common.errors import ConsistencyError, InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.drift.model import DriftModel

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-12
DEFAULT_RESOLUTION = 1024
REFINE_POINTS = 65
MAX_NODE_TABLES = 8


def truncation_radius(c: float, gamma: float, n: float) -> float:
    """(c/n)^{1/γ}"""
    if n < 1:
        raise InvalidArgumentError(f"truncation level must be >= 1, got {n}")
    if c <= 0 or gamma <= 0:
        raise InvalidArgumentError(f"need c, γ > 0, got c={c}, γ={gamma}")
    return (c / n) ** (1.0 / gamma)


def epsilon_n(model: DriftModel, n: float) -> float:
    """Truncation collar radius εₙ = (c/n)^{1/γ} of a singular model."""
    if not model.singular:
        raise InvalidArgumentError(f"model '{model.name}' has no singular collar")
    return truncation_radius(model.c, model.gamma, n)


def _scan_times(model: DriftModel, resolution: int) -> np.ndarray:
    if resolution < 1:
        raise InvalidArgumentError(f"time resolution must be >= 1, got {resolution}")
    return np.linspace(0.0, model.horizon, resolution + 1)


def minimum_level(model: DriftModel, time_resolution: int = DEFAULT_RESOLUTION) -> int:
    """n₀ = ceil(max_t |b(t, φ(t) + y_*)|), including the ψ collar for two-sided models."""
    if not model.singular:
        return 1
    t = _scan_times(model, time_resolution)
    peak = np.max(np.abs(model.raw(t, np.asarray(model.phi(t)) + model.y_star)))
    if model.two_sided:
        peak = max(peak, np.max(np.abs(model.raw(t, np.asarray(model.psi(t)) - model.y_star))))
    if not np.isfinite(peak):
        raise ConsistencyError(f"drift of '{model.name}' is not finite on the y* collar boundary")
    return max(1, int(math.ceil(peak)))


def _side_root(model: DriftModel, n: float, t: np.ndarray, upper: bool, strict: bool) -> np.ndarray:
    """
    Smallest η > 0 with s·b(t, base + s·η) ≤ n, where (base, s) = (φ, +1) or (ψ, −1).
    """
    sign = -1.0 if upper else 1.0
    base = np.asarray(model.psi(t) if upper else model.phi(t), dtype=np.float64)

    def g(eta):
        with np.errstate(all="ignore"):
            return sign * model.raw(t, base + sign * eta)

    hi = np.full(t.shape, model.y_star)
    above = ~(g(hi) <= n)
    if np.any(above):
        if strict:
            k = int(np.flatnonzero(above)[0])
            raise ConsistencyError(
                f"collar bracket failed at t={t[k]:.6g}: |b| exceeds n={n} at distance y*={model.y_star:.6g}; "
                "the level is below n0"
            )
        cap = 0.5 * (np.asarray(model.psi(t)) - np.asarray(model.phi(t))) if model.two_sided else np.inf
        for _ in range(64):
            hi = np.where(above, np.minimum(2.0 * hi, cap), hi)
            above = ~(g(hi) <= n)
            if not np.any(above):
                break
        else:
            k = int(np.flatnonzero(above)[0])
            raise ConsistencyError(f"no collar root for level n={n} at t={t[k]:.6g}")

    lo = 0.5 * hi
    low_ok = g(lo) > n
    for _ in range(1100):
        if np.all(low_ok):
            break
        lo = np.where(low_ok, lo, 0.5 * lo)
        low_ok = g(lo) > n
    else:
        raise ConsistencyError(f"drift of '{model.name}' stays below n={n} next to the bound")

    for _ in range(200):
        if np.max(hi - lo) <= ROOT_TOLERANCE:
            break
        mid = 0.5 * (lo + hi)
        mid_above = g(mid) > n
        lo = np.where(mid_above, mid, lo)
        hi = np.where(mid_above, hi, mid)
    return hi


def collar_roots(
    model: DriftModel, n: float, t: np.ndarray, strict: bool = True
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Collar roots η_n(t) at φ and, for two-sided models, η^ψ_n(t) at ψ."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    lower = _side_root(model, n, t, upper=False, strict=strict)
    upper = _side_root(model, n, t, upper=True, strict=strict) if model.two_sided else None
    return lower, upper


def gap_delta_n(
    model: DriftModel, n: float, time_resolution: int = DEFAULT_RESOLUTION, strict: bool = True
) -> float:
    """
    δₙ = inf_t (y_n(t) − φ(t)); two-sided the max of that and inf_t (ψ(t) − y^ψ_n(t)).

    The infimum is a scan over ``time_resolution`` + 1 nodes refined around the scan
    minimum.
    """
    if not model.singular:
        raise InvalidArgumentError(f"model '{model.name}' has no singular collar")
    t = _scan_times(model, time_resolution)

    def side_inf(upper: bool) -> float:
        roots = _side_root(model, n, t, upper, strict)
        j = int(np.argmin(roots))
        window = np.linspace(t[max(j - 1, 0)], t[min(j + 1, t.shape[0] - 1)], REFINE_POINTS)
        return float(min(roots[j], np.min(_side_root(model, n, window, upper, strict))))

    delta = side_inf(False)
    if model.two_sided:
        delta = max(delta, side_inf(True))
    return delta


@dataclass(frozen=True)
class NodeTable:
    """Bounds and clamp edges at the nodes of one grid."""

    grid: TimeGrid
    phi: np.ndarray
    psi: np.ndarray
    lower_edge: np.ndarray
    upper_edge: np.ndarray


@dataclass(frozen=True)
class TruncatedDrift:
    base: DriftModel
    level: int
    epsilon: float
    lipschitz_constant: float
    minimum_level: int
    strict: bool = True
    _tables: Dict[TimeGrid, NodeTable] = field(default_factory=dict, compare=False, repr=False)

    def edges(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if not self.base.singular:
            return np.full(t.shape, -np.inf), np.full(t.shape, np.inf)
        lower, upper = collar_roots(self.base, self.level, t, self.strict)
        lower_edge = np.asarray(self.base.phi(t)) + lower
        upper_edge = np.asarray(self.base.psi(t)) - upper if upper is not None else np.full(t.shape, np.inf)
        return lower_edge, upper_edge

    def node_table(self, grid: TimeGrid) -> NodeTable:
        table = self._tables.get(grid)
        if table is None:
            if grid.horizon != self.base.horizon:
                raise InvalidArgumentError(f"grid horizon {grid.horizon} differs from model horizon {self.base.horizon}")
            t = grid.nodes
            lower_edge, upper_edge = self.edges(t)
            table = NodeTable(
                grid,
                np.broadcast_to(np.asarray(self.base.phi(t), dtype=np.float64), t.shape),
                np.broadcast_to(np.asarray(self.base.psi(t), dtype=np.float64), t.shape),
                lower_edge,
                upper_edge,
            )
            if len(self._tables) >= MAX_NODE_TABLES:
                self._tables.pop(next(iter(self._tables)))
            self._tables[grid] = table
        return table

    def apply(self, t, y: np.ndarray, lower_edge, upper_edge) -> Tuple[np.ndarray, np.ndarray]:
        """b̃ₙ at (t, y) given the clamp edges at t; also returns the clamp mask."""
        y = np.asarray(y, dtype=np.float64)
        low = y <= lower_edge
        high = y >= upper_edge
        values = np.asarray(self.base.raw(t, np.clip(y, lower_edge, upper_edge)), dtype=np.float64)
        values = np.where(low, float(self.level), np.where(high, -float(self.level), values))
        return values, low | high

    def evaluate(self, t, y):
        """b̃ₙ(t, y), total on [0, T] × ℝ."""
        t_arr, y_arr = np.broadcast_arrays(np.asarray(t, dtype=np.float64), np.asarray(y, dtype=np.float64))
        lower_edge, upper_edge = self.edges(t_arr.ravel())
        values, _ = self.apply(t_arr.ravel(), y_arr.ravel(), lower_edge, upper_edge)
        return values.reshape(t_arr.shape)[()]

    def __call__(self, t, y):
        return self.evaluate(t, y)


def truncate_drift(
    model: DriftModel, n: int, strict: bool = True, time_resolution: Optional[int] = None
) -> TruncatedDrift:
    """
    Truncate ``model`` at level n; n₀ is scanned on ``time_resolution`` + 1 times
    (default ``settings.delta_resolution``).

    Raises:
        InvalidArgumentError: If n < n₀ in strict mode. With ``strict=False`` a level below
            n₀ is accepted (logged) as long as every collar root exists.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgumentError(f"truncation level must be a positive integer, got {n!r}")
    n = int(n)
    if not model.singular:
        return TruncatedDrift(model, n, math.inf, model.lipschitz(1.0), 1, strict)

    if time_resolution is None:
        from sandwich_sde.common.config import settings

        time_resolution = settings.delta_resolution
    n0 = minimum_level(model, time_resolution)
    if n < n0:
        if strict:
            raise InvalidArgumentError(f"truncation level n={n} is below n0={n0} for '{model.name}'")
        logger.warning(f"Truncation level n={n} is below n0={n0} for '{model.name}'; using roots beyond y*")
    eps = epsilon_n(model, n)
    lipschitz = model.lipschitz(eps, eps) if model.two_sided else model.lipschitz(eps)
    return TruncatedDrift(model, n, eps, lipschitz, n0, strict)
