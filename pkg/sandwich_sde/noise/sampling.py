import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.path import SamplePath
from sandwich_sde.core.rng import RngStream
from sandwich_sde.noise.fbm import check_hurst, circulant_eigenvalues, circulant_fgn, hosking_fgn

logger = logging.getLogger(__name__)


class NoiseKind(str, Enum):
    ZERO = "zero"
    BROWNIAN = "brownian"
    FBM = "fbm"
    MIXED = "mixed"


class Generator(str, Enum):
    CIRCULANT = "circulant"
    HOSKING = "hosking"


@dataclass(frozen=True)
class NoiseSpec:
    """
    Law of the driving noise Z.

    ``mixed`` is ν₁B + ν₂B^H with independent B and B^H. Every kind is multiplied by
    ``scale`` (σ), so e.g. the fCIR example driven by (σ/2)B^H uses scale=σ/2.
    """

    kind: NoiseKind = NoiseKind.FBM
    hurst: float = 0.5
    nu1: float = 0.0
    nu2: float = 0.0
    scale: float = 1.0
    generator: Generator = Generator.CIRCULANT

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "generator", Generator(self.generator))
        if self.kind in (NoiseKind.FBM, NoiseKind.MIXED):
            check_hurst(self.hurst)
        if not (math.isfinite(self.scale) and self.scale >= 0):
            raise InvalidArgumentError(f"noise scale must be a nonnegative number, got {self.scale}")
        if self.kind == NoiseKind.MIXED:
            if self.nu1 < 0 or self.nu2 < 0:
                raise InvalidArgumentError(f"mixed noise weights must be nonnegative, got ν₁={self.nu1}, ν₂={self.nu2}")
            if self.nu1**2 + self.nu2**2 <= 0:
                raise InvalidArgumentError("mixed noise needs ν₁² + ν₂² > 0")

    @property
    def holder_limit(self) -> float:
        """Supremum of the admissible Hölder orders of the paths."""
        if self.kind == NoiseKind.ZERO:
            return 1.0
        if self.kind == NoiseKind.BROWNIAN:
            return 0.5
        if self.kind == NoiseKind.MIXED and self.nu1 > 0:
            return min(self.hurst, 0.5)
        return self.hurst


def _brownian(rng: np.random.Generator, grid: TimeGrid) -> np.ndarray:
    increments = math.sqrt(grid.mesh) * rng.standard_normal(grid.steps)
    return np.concatenate([[0.0], np.cumsum(increments)])


def _fractional(rng: np.random.Generator, grid: TimeGrid, hurst: float, generator: Generator) -> Tuple[np.ndarray, str]:
    used = generator
    if generator == Generator.CIRCULANT and circulant_eigenvalues(grid.steps, hurst).size == 0:
        used = Generator.HOSKING
    fgn = circulant_fgn(rng, grid.steps, hurst) if used == Generator.CIRCULANT else hosking_fgn(rng, grid.steps, hurst)
    increments = fgn * grid.mesh**hurst
    return np.concatenate([[0.0], np.cumsum(increments)]), used.value


def sample_noise(spec: NoiseSpec, grid: TimeGrid, stream: RngStream) -> SamplePath:
    """
    Draw one noise path on ``grid``, deterministic in (spec, grid, stream).

    The path starts at 0 and its increments have the exact joint Gaussian law of the
    requested process. ``metadata["fallback"]`` is set when the circulant embedding was
    rejected and the Hosking recursion ran instead.
    """
    metadata = {"kind": spec.kind.value, "generator": None, "fallback": False}
    if spec.kind == NoiseKind.ZERO:
        values = np.zeros(grid.steps + 1)
    elif spec.kind == NoiseKind.BROWNIAN:
        values = _brownian(stream.generator(), grid)
    elif spec.kind == NoiseKind.FBM:
        values, used = _fractional(stream.generator(), grid, spec.hurst, spec.generator)
        metadata["generator"] = used
    else:
        brownian = _brownian(stream.substream(0).generator(), grid)
        fractional, used = _fractional(stream.substream(1).generator(), grid, spec.hurst, spec.generator)
        values = spec.nu1 * brownian + spec.nu2 * fractional
        metadata["generator"] = used

    if metadata["generator"] is not None and metadata["generator"] != spec.generator.value:
        metadata["fallback"] = True
        logger.warning(f"Stream {stream.spawn_key}: circulant embedding rejected, used Hosking recursion")
    return SamplePath(grid, spec.scale * values, metadata)


def sample_noise_paths(spec: NoiseSpec, grid: TimeGrid, seed: int, indices: Iterable[int]) -> np.ndarray:
    """Rows are ``sample_noise(spec, grid, RngStream(seed, i)).values`` for each index i."""
    rows = [sample_noise(spec, grid, RngStream(seed, i)).values for i in indices]
    if not rows:
        return np.empty((0, grid.steps + 1))
    return np.vstack(rows)
