"""
Monte Carlo moments of the running supremum and of the inverse distance to the bounds.

Sums go through ``math.fsum`` so the estimates do not depend on the order in which
per-path values were reduced.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from sandwich_sde.common.errors import DomainError, InvalidArgumentError
from sandwich_sde.core.path import SamplePath
from sandwich_sde.drift.model import DriftModel

logger = logging.getLogger(__name__)

# estimates at m and 2m paths count as stable within this many standard errors
STABILITY_ERRORS = 3.0


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    half_mean: float
    half_stderr: float

    @property
    def stable(self) -> bool:
        """Whether the estimate on the first half of the sample agrees with the full one."""
        return abs(self.mean - self.half_mean) <= STABILITY_ERRORS * max(self.half_stderr, self.stderr)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "half_mean": self.half_mean,
            "half_stderr": self.half_stderr,
            "stable": self.stable,
        }


@dataclass(frozen=True)
class MomentReport:
    r: float
    paths: int
    sup_moment: MomentEstimate
    inverse_moment: Optional[MomentEstimate]

    @property
    def stable(self) -> bool:
        return self.sup_moment.stable and (self.inverse_moment is None or self.inverse_moment.stable)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "paths": self.paths,
            "sup_moment": self.sup_moment.to_dict(),
            "inverse_moment": None if self.inverse_moment is None else self.inverse_moment.to_dict(),
            "stable": self.stable,
        }


def _mean_stderr(samples: np.ndarray):
    m = samples.shape[0]
    mean = math.fsum(samples) / m
    if m < 2:
        return mean, math.inf
    variance = math.fsum((samples - mean) ** 2) / (m - 1)
    return mean, math.sqrt(variance / m)


def _estimate(samples: np.ndarray) -> MomentEstimate:
    mean, stderr = _mean_stderr(samples)
    half_mean, half_stderr = _mean_stderr(samples[: samples.shape[0] // 2])
    return MomentEstimate(mean, stderr, half_mean, half_stderr)


def inverse_distance_sup(path: SamplePath, model: DriftModel, r: float) -> float:
    """sup_t (Y_t − φ(t))^{−r}, also over (ψ(t) − Y_t)^{−r} for two-sided models."""
    t = path.times
    gap = path.values - np.asarray(model.phi(t), dtype=np.float64)
    if model.two_sided:
        gap = np.minimum(gap, np.asarray(model.psi(t), dtype=np.float64) - path.values)
    bad = np.flatnonzero(gap <= 0)
    if bad.size:
        raise DomainError("path touches its confinement bound", index=int(bad[0]))
    return float(np.max(gap ** (-r)))


def upper_moment_estimate(paths: Sequence[SamplePath], r: float, model: DriftModel) -> MomentReport:
    """
    E[sup_t |Y_t|^r] and, for singular models, E[sup_t (Y_t − φ(t))^{−r}] with standard
    errors; the grid maximum stands in for the supremum.

    Raises:
        InvalidArgumentError: If r ≤ 0 or fewer than two paths are given.
        DomainError: If a path touches a bound, with the node index.
    """
    if r <= 0:
        raise InvalidArgumentError(f"moment order r must be positive, got {r}")
    if len(paths) < 2:
        raise InvalidArgumentError(f"moment estimates need at least 2 paths, got {len(paths)}")
    sup = np.array([float(np.max(np.abs(path.values))) ** r for path in paths])
    inverse = None
    if model.singular:
        inverse = _estimate(np.array([inverse_distance_sup(path, model, r) for path in paths]))
    report = MomentReport(r, len(paths), _estimate(sup), inverse)
    if not report.stable:
        logger.warning(f"Moment estimates of order r={r} did not stabilize under sample doubling")
    return report
