"""
CSV rendering of sample paths.

Format: header ``t,value``, one row per grid node, LF line endings and values printed
with 17 significant digits so that reading back reproduces every double exactly.
"""

import logging
import os
from typing import List, Union

import fsspec
import numpy as np

from sandwich_sde.common.errors import PathFormatError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.path import SamplePath

logger = logging.getLogger(__name__)

HEADER = "t,value"
PathLike = Union[str, os.PathLike]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def format_path_csv(path: SamplePath) -> str:
    rows = [HEADER]
    rows.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(path.times.tolist(), path.values.tolist()))
    return "\n".join(rows) + "\n"


def parse_path_csv(text: str) -> SamplePath:
    """
    Parse the CSV produced by ``format_path_csv``.

    Raises:
        PathFormatError: On a bad header, malformed row, non-finite value, non-increasing
            time column, or times that do not form a uniform grid starting at 0.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != HEADER:
        raise PathFormatError(f"expected header '{HEADER}'", line=1)
    if len(lines) < 3:
        raise PathFormatError("a path needs at least two nodes", line=len(lines))

    times: List[float] = []
    values: List[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise PathFormatError(f"expected 2 fields, found {len(parts)}", line=lineno)
        try:
            t, v = float(parts[0]), float(parts[1])
        except ValueError:
            raise PathFormatError(f"unparseable row {line!r}", line=lineno) from None
        if not (np.isfinite(t) and np.isfinite(v)):
            raise PathFormatError("non-finite entry", line=lineno)
        if times and t <= times[-1]:
            raise PathFormatError(f"time column not strictly increasing ({t} after {times[-1]})", line=lineno)
        times.append(t)
        values.append(v)

    if times[0] != 0.0:
        raise PathFormatError(f"time column must start at 0, found {times[0]}", line=2)
    grid = TimeGrid(times[-1], len(times) - 1)
    expected = grid.nodes
    tolerance = 1e-12 * grid.horizon
    mismatch = np.flatnonzero(np.abs(np.asarray(times) - expected) > tolerance)
    if mismatch.size:
        k = int(mismatch[0])
        raise PathFormatError(f"time {times[k]} is not a node of the uniform grid (expected {expected[k]})", line=k + 2)
    return SamplePath(grid, np.asarray(values))


def write_path_csv(path: SamplePath, destination: PathLike) -> None:
    """Write ``path`` to a local file or any fsspec URL."""
    with fsspec.open(os.fspath(destination), "w", newline="\n", encoding="utf-8") as f:
        f.write(format_path_csv(path))
    logger.debug(f"Wrote {len(path)} nodes to {destination}")


def read_path_csv(source: PathLike) -> SamplePath:
    with fsspec.open(os.fspath(source), "r", encoding="utf-8") as f:
        return parse_path_csv(f.read())
