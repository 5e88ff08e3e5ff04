"""
Semi-heuristic Euler scheme on the truncated drift and the approximating sequence.

At the grid nodes the scheme reads

    Ŷ_{k+1} = Ŷ_k + b̃ₙ(t_k, Ŷ_k)·T/N + (Z_{t_{k+1}} − Z_{t_k}),

which is the integral form with piecewise-constant noise Z_{τ₋(t)} evaluated at nodes.
The recursion runs over a batch of noise paths at once; each path's arithmetic is
elementwise, so results do not depend on how paths are batched. Leaving the band is
reported, never corrected.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError, NumericError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.path import SamplePath
from sandwich_sde.drift.model import DriftModel
from sandwich_sde.scheme.truncation import TruncatedDrift, truncate_drift

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SchemeResult:
    """Output of one scheme run: the path Ŷ^{N,n} and what happened along it."""

    path: SamplePath
    level: int
    drift_values: np.ndarray
    clamp_activations: int
    min_lower_gap: float
    min_upper_gap: Optional[float]
    crossings: int

    @property
    def grid(self) -> TimeGrid:
        return self.path.grid

    @property
    def exited(self) -> bool:
        return self.crossings > 0

    def interpolate(self, fine: TimeGrid) -> np.ndarray:
        """
        Ŷ^{N,n} at the nodes of a refinement of its grid: drift integrated linearly
        between nodes, noise frozen at Z_{τ₋(t)}.
        """
        factor = fine.coarsening_factor(self.grid)
        j = np.arange(fine.steps + 1)
        k = j // factor
        drift = np.append(self.drift_values, 0.0)
        return self.path.values[k] + drift[k] * (j - k * factor) * fine.mesh

    def summary(self) -> dict:
        return {
            "level": self.level,
            "clamp_activations": self.clamp_activations,
            "min_lower_gap": self.min_lower_gap,
            "min_upper_gap": self.min_upper_gap,
            "crossings": self.crossings,
        }


def _check_initial(trunc: TruncatedDrift, y0: float) -> None:
    model = trunc.base
    if not np.isfinite(y0):
        raise InvalidArgumentError(f"initial value must be finite, got {y0}")
    if model.singular and not bool(model.contains(0.0, y0)):
        raise InvalidArgumentError(
            f"initial value {y0} must lie strictly inside the band at t=0 "
            f"(φ(0)={float(model.phi(0.0)):.6g}, ψ(0)={float(model.psi(0.0)):.6g})"
        )


def run_scheme_batch(
    trunc: TruncatedDrift, grid: TimeGrid, noise: np.ndarray, y0: float, shift: float = 0.0
) -> List[SchemeResult]:
    """
    Run the recursion for every row of ``noise`` (shape (M, N+1), rows starting at 0).

    ``shift`` is added to the drift; the approximating sequence uses −1/n.

    Raises:
        InvalidArgumentError: On a bad initial value or noise not starting at 0.
        NumericError: If a path becomes non-finite, with the first bad node.
    """
    _check_initial(trunc, y0)
    noise = np.atleast_2d(np.asarray(noise, dtype=np.float64))
    if noise.shape[1] != grid.steps + 1:
        raise InvalidArgumentError(f"noise has {noise.shape[1]} nodes, grid needs {grid.steps + 1}")
    if np.any(noise[:, 0] != 0.0):
        raise InvalidArgumentError("noise paths must start at 0")

    table = trunc.node_table(grid)
    increments = np.diff(noise, axis=1)
    paths, steps = noise.shape[0], grid.steps
    dt = grid.mesh
    values = np.empty((paths, steps + 1))
    drifts = np.empty((paths, steps))
    clamps = np.zeros(paths, dtype=np.int64)
    values[:, 0] = y0
    times = grid.nodes
    with np.errstate(all="ignore"):
        for k in range(steps):
            y = values[:, k]
            drift, clamped = trunc.apply(times[k], y, table.lower_edge[k], table.upper_edge[k])
            if shift:
                drift = drift + shift
            drifts[:, k] = drift
            clamps += clamped
            values[:, k + 1] = y + drift * dt + increments[:, k]

    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad.any(axis=1))[0])
        raise NumericError(f"scheme diverged on path {row}", index=int(np.argmax(bad[row])))

    lower_gap = values - table.phi
    upper_gap = table.psi - values if trunc.base.two_sided else None
    outside = lower_gap <= 0
    if upper_gap is not None:
        outside |= upper_gap <= 0

    results = []
    for i in range(paths):
        results.append(
            SchemeResult(
                path=SamplePath(grid, values[i]),
                level=trunc.level,
                drift_values=drifts[i],
                clamp_activations=int(clamps[i]),
                min_lower_gap=float(np.min(lower_gap[i])),
                min_upper_gap=None if upper_gap is None else float(np.min(upper_gap[i])),
                crossings=int(np.count_nonzero(outside[i])),
            )
        )
    return results


def euler_semiheuristic(trunc: TruncatedDrift, noise: SamplePath, y0: float) -> SchemeResult:
    """Ŷ^{N,n} driven by one noise path."""
    (result,) = run_scheme_batch(trunc, noise.grid, noise.values[None, :], y0)
    if result.exited:
        logger.info(f"Scheme left the band at {result.crossings} nodes (n={trunc.level})")
    return result


def approximating_path(
    model: DriftModel, n: int, noise: SamplePath, y0: float, strict: bool = True
) -> SamplePath:
    """The n-th approximant Y⁽ⁿ⁾ with drift b̃ₙ − 1/n, on the noise grid."""
    trunc = truncate_drift(model, n, strict=strict)
    (result,) = run_scheme_batch(trunc, noise.grid, noise.values[None, :], y0, shift=-1.0 / n)
    return result.path


def approximating_sequence(
    model: DriftModel, levels: Sequence[int], noise: SamplePath, y0: float, strict: bool = True
) -> List[SamplePath]:
    return [approximating_path(model, n, noise, y0, strict) for n in levels]
