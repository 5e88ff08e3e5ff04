from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError, NumericError
from sandwich_sde.core.grid import TimeGrid


@dataclass(frozen=True, eq=False)
class SamplePath:
    """
    Values of a process at the nodes of a grid.

    ``values`` is stored read-only. ``metadata`` records how the path was produced
    (e.g. which noise generator ran) and does not take part in equality.
    """

    grid: TimeGrid
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.grid.steps + 1:
            raise InvalidArgumentError(
                f"path needs {self.grid.steps + 1} values for a grid with N={self.grid.steps}, got shape {values.shape}"
            )
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NumericError("sample path contains a non-finite value", index=int(bad[0]))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SamplePath):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def times(self) -> np.ndarray:
        return self.grid.nodes

    def __len__(self) -> int:
        return self.values.shape[0]

    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def restrict(self, coarse: TimeGrid) -> "SamplePath":
        """The same path observed only at the nodes of a coarser grid."""
        factor = self.grid.coarsening_factor(coarse)
        return SamplePath(coarse, self.values[::factor], dict(self.metadata))

    def shifted(self, offset: float) -> "SamplePath":
        return SamplePath(self.grid, self.values + offset, dict(self.metadata))
