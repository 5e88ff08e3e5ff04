"""
Uniform time grids on [0, T] and the projections onto their nodes.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition t_k = kT/N, k = 0..N, of [0, T]."""

    horizon: float
    steps: int

    def __post_init__(self):
        if not (isinstance(self.horizon, (int, float)) and math.isfinite(self.horizon) and self.horizon > 0):
            raise InvalidArgumentError(f"horizon must be a positive finite number, got {self.horizon!r}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            raise InvalidArgumentError(f"steps must be a positive integer, got {self.steps!r}")
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def mesh(self) -> float:
        return self.horizon / self.steps

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = np.arange(self.steps + 1, dtype=np.float64) * self.horizon / self.steps
        nodes[-1] = self.horizon
        nodes.setflags(write=False)
        return nodes

    def __len__(self) -> int:
        return self.steps + 1

    def node(self, k: int) -> float:
        return float(self.nodes[k])

    def index_of(self, t: float) -> int:
        """Index of tau_minus(t)."""
        _check_time(self, t)
        k = min(int(math.floor(t / self.mesh)), self.steps)
        # floor can land one node off when kT/N is not exactly representable
        while k < self.steps and self.nodes[k + 1] <= t:
            k += 1
        while k > 0 and self.nodes[k] > t:
            k -= 1
        return k

    def refine(self, factor: int) -> "TimeGrid":
        if factor < 1:
            raise InvalidArgumentError(f"refinement factor must be >= 1, got {factor}")
        return TimeGrid(self.horizon, self.steps * factor)

    def coarsening_factor(self, coarse: "TimeGrid") -> int:
        """Return m such that this grid is ``coarse`` refined m times."""
        if coarse.horizon != self.horizon or self.steps % coarse.steps:
            raise InvalidArgumentError(
                f"grid (T={coarse.horizon}, N={coarse.steps}) is not a coarsening of (T={self.horizon}, N={self.steps})"
            )
        return self.steps // coarse.steps


def make_grid(horizon: float, steps: int) -> TimeGrid:
    return TimeGrid(horizon, steps)


def _check_time(grid: TimeGrid, t: float) -> None:
    if not (0.0 <= t <= grid.horizon):
        raise InvalidArgumentError(f"time {t} outside [0, {grid.horizon}]")


def tau_minus(grid: TimeGrid, t: float) -> float:
    """Largest node t_k with t_k <= t."""
    return grid.node(grid.index_of(t))


def tau_plus(grid: TimeGrid, t: float) -> float:
    """Smallest node t_k with t_k >= t."""
    k = grid.index_of(t)
    if grid.nodes[k] == t:
        return grid.node(k)
    return grid.node(k + 1)
