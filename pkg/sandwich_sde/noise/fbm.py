"""
Exact Gaussian synthesis of fractional Brownian motion on a uniform grid.

Two generators produce fractional Gaussian noise (unit-step increments), which is then
scaled by dt**H and summed:

    - circulant: Davies-Harte circulant embedding, O(N log N);
    - hosking:   Durbin-Levinson recursion on the Toeplitz covariance, O(N^2).

The circulant embedding is only valid when every eigenvalue of the embedding is
nonnegative; callers fall back to Hosking otherwise.
"""

import logging
from functools import lru_cache

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid

logger = logging.getLogger(__name__)

# relative size below which negative circulant eigenvalues count as rounding noise
EIGENVALUE_TOLERANCE = 1e-10


def check_hurst(hurst: float) -> None:
    if not (0.0 < hurst < 1.0):
        raise InvalidArgumentError(f"Hurst index must lie in (0, 1), got {hurst}")


def fbm_covariance(s: float, t: float, hurst: float) -> float:
    """Cov(B^H_s, B^H_t) = ½(t^{2H} + s^{2H} − |t−s|^{2H})."""
    check_hurst(hurst)
    if s < 0 or t < 0:
        raise InvalidArgumentError(f"times must be nonnegative, got s={s}, t={t}")
    h2 = 2.0 * hurst
    return 0.5 * (t**h2 + s**h2 - abs(t - s) ** h2)


def fbm_covariance_matrix(grid: TimeGrid, hurst: float) -> np.ndarray:
    """Covariance of (B^H_{t_1}, ..., B^H_{t_N}); the node t_0 = 0 is omitted."""
    check_hurst(hurst)
    t = grid.nodes[1:]
    h2 = 2.0 * hurst
    return 0.5 * (t[:, None] ** h2 + t[None, :] ** h2 - np.abs(t[:, None] - t[None, :]) ** h2)


def fbm_autocovariance(k, hurst: float) -> np.ndarray:
    """Autocovariance of unit-step fractional Gaussian noise at lag k."""
    k = np.abs(np.asarray(k, dtype=np.float64))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


@lru_cache(maxsize=32)
def circulant_eigenvalues(steps: int, hurst: float) -> np.ndarray:
    """
    Eigenvalues of the 2N circulant embedding of the fGn covariance, or an empty
    array when the embedding is not nonnegative definite.
    """
    gamma = fbm_autocovariance(np.arange(steps + 1), hurst)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    eigenvalues = np.fft.fft(row).real
    floor = -EIGENVALUE_TOLERANCE * float(np.max(np.abs(eigenvalues)))
    if np.any(eigenvalues < floor):
        logger.warning(
            f"Circulant embedding has negative eigenvalues for N={steps}, H={hurst} "
            f"(min {eigenvalues.min():.3e})"
        )
        return np.empty(0)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    eigenvalues.setflags(write=False)
    return eigenvalues


def circulant_fgn(rng: np.random.Generator, steps: int, hurst: float) -> np.ndarray:
    """
    Unit-step fGn of length ``steps`` by circulant embedding.

    The real part of F·diag(sqrt(λ/2N))·(ξ₁ + iξ₂) has exactly the embedded covariance.

    Raises:
        ValueError: When the embedding has negative eigenvalues.
    """
    eigenvalues = circulant_eigenvalues(steps, hurst)
    if eigenvalues.size == 0:
        raise ValueError("circulant embedding is not nonnegative definite")
    m = eigenvalues.shape[0]
    xi = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return np.fft.fft(np.sqrt(eigenvalues / m) * xi).real[:steps]


def hosking_fgn(rng: np.random.Generator, steps: int, hurst: float) -> np.ndarray:
    """Unit-step fGn of length ``steps`` by the Durbin-Levinson (Hosking) recursion."""
    gamma = fbm_autocovariance(np.arange(steps + 1), hurst)
    noise = rng.standard_normal(steps)
    out = np.empty(steps)
    out[0] = noise[0]
    phi = np.zeros(0)
    variance = 1.0
    for k in range(1, steps):
        # partial autocorrelation from the previous prediction coefficients
        kappa = (gamma[k] - np.dot(phi, gamma[k - 1 : 0 : -1])) / variance
        phi = np.concatenate([phi - kappa * phi[::-1], [kappa]])
        variance *= 1.0 - kappa * kappa
        mean = np.dot(phi, out[k - 1 :: -1])
        out[k] = mean + np.sqrt(variance) * noise[k]
    return out
