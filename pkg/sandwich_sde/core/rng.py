"""
Deterministic random streams keyed by (master seed, stream index).

Streams are derived with numpy's ``SeedSequence`` spawn keys and drive a counter-based
Philox generator, so path i always sees the same numbers whichever worker
simulates it and however many workers there are.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from sandwich_sde.common.errors import InvalidArgumentError

SEED_LIMIT = 2**64


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_index: int
    path: Tuple[int, ...] = ()

    def __post_init__(self):
        if not (0 <= self.master_seed < SEED_LIMIT):
            raise InvalidArgumentError(f"master seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise InvalidArgumentError(f"stream index must be nonnegative, got {self.stream_index}")

    @property
    def spawn_key(self) -> Tuple[int, ...]:
        return (self.stream_index, *self.path)

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.spawn_key)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def substream(self, child: int) -> "RngStream":
        """Independent child stream, e.g. the Brownian and fractional parts of mixed noise."""
        if child < 0:
            raise InvalidArgumentError(f"substream index must be nonnegative, got {child}")
        return RngStream(self.master_seed, self.stream_index, (*self.path, child))

    def raw_bytes(self, count: int) -> bytes:
        return self.generator().bytes(count)
