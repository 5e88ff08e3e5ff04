"""
Power transform X = Y^{1/(1−α)} back to the CIR/CEV scale and the pathwise residual of

    dX_t = (κ̃ − θ̃X_t)dt + ν̃X_t^α dZ_t,   κ̃ = κ/(1−α), θ̃ = θ/(1−α), ν̃ = 1/(1−α),

with the stochastic term as left-point Riemann-Stieltjes sums.
"""

import numpy as np

from sandwich_sde.common.errors import DomainError, InvalidArgumentError
from sandwich_sde.core.path import SamplePath


def _check_alpha(alpha: float) -> None:
    if not (0.5 <= alpha < 1.0):
        raise InvalidArgumentError(f"α must lie in [½, 1), got {alpha}")


def cev_transform(path: SamplePath, alpha: float) -> SamplePath:
    """
    Nodewise X_t = Y_t^{1/(1−α)}.

    Raises:
        DomainError: At the first nonpositive value of the path.
    """
    _check_alpha(alpha)
    bad = np.flatnonzero(path.values <= 0)
    if bad.size:
        raise DomainError(f"CEV transform needs positive values, got {path.values[bad[0]]:g}", index=int(bad[0]))
    metadata = dict(path.metadata, transform=f"power 1/(1-{alpha:g})")
    return SamplePath(path.grid, path.values ** (1.0 / (1.0 - alpha)), metadata)


def young_residual(path_y: SamplePath, noise: SamplePath, kappa: float, theta: float, alpha: float) -> float:
    """
    max_k |X_{t_k} − X₀ − Σ_{j<k}(κ̃ − θ̃X_{t_j})Δ − ν̃Σ_{j<k} X^α_{t_j}(Z_{t_{j+1}} − Z_{t_j})|
    for X = cev_transform(path_y, α).

    ``kappa`` and ``theta`` are the coefficients of the drift κ/y^{α/(1−α)} − θy of Y
    and ``noise`` is the Z that drove it.
    """
    if path_y.grid != noise.grid:
        raise InvalidArgumentError("path and noise must share a grid")
    x = cev_transform(path_y, alpha).values
    scale = 1.0 / (1.0 - alpha)
    drift = scale * (kappa - theta * x[:-1]) * path_y.grid.mesh
    stochastic = scale * x[:-1] ** alpha * noise.increments()
    predicted = np.concatenate([[0.0], np.cumsum(drift + stochastic)])
    return float(np.max(np.abs(x - x[0] - predicted)))
