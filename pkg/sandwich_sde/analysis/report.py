"""
Study results and the log-log regression shared by every study.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import stats

from sandwich_sde.common.errors import InvalidArgumentError


@dataclass(frozen=True)
class PowerLawFit:
    """log y = intercept + slope·log x, with the slope's standard error and R²."""

    slope: float
    intercept: float
    stderr: float
    r2: float
    points: int

    def to_dict(self) -> dict:
        return asdict(self)


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """
    Least-squares fit of y ∝ x^slope on log scales.

    Raises:
        InvalidArgumentError: With fewer than two points or a nonpositive value.
    """
    x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.size < 2:
        raise InvalidArgumentError(f"power-law fit needs two or more matching points, got {x.size} and {y.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidArgumentError("power-law fit needs positive data")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise InvalidArgumentError("power-law fit needs at least two distinct abscissae")
    if np.ptp(ly) == 0:
        return PowerLawFit(0.0, float(ly[0]), 0.0, 1.0, int(x.size))
    result = stats.linregress(lx, ly)
    stderr = float(result.stderr) if math.isfinite(result.stderr) else 0.0
    return PowerLawFit(float(result.slope), float(result.intercept), stderr, float(result.rvalue**2), int(x.size))


@dataclass
class StudyReport:
    """
    Outcome of one study.

    ``metrics`` holds per-rung or per-run arrays, ``expected`` the exponent (or
    threshold) the run is judged against. ``inconclusive`` runs count as passed.
    """

    kind: str
    parameters: Dict[str, Any]
    metrics: Dict[str, Any]
    fit: Optional[PowerLawFit] = None
    expected: Optional[float] = None
    passed: bool = False
    inconclusive: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "metrics": self.metrics,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "expected": self.expected,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "notes": list(self.notes),
        }
