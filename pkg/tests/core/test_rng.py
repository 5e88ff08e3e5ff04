import numpy as np
import pytest

from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core import RngStream
from sandwich_sde.core.rng import SEED_LIMIT


class TestRngStream:
    def test_same_key_same_numbers(self):
        a = RngStream(42, 7).generator().standard_normal(16)
        b = RngStream(42, 7).generator().standard_normal(16)
        np.testing.assert_array_equal(a, b)

    def test_indices_independent(self):
        assert RngStream(42, 0).raw_bytes(32) != RngStream(42, 1).raw_bytes(32)

    def test_seeds_independent(self):
        assert RngStream(1, 0).raw_bytes(32) != RngStream(2, 0).raw_bytes(32)

    def test_substream(self):
        parent = RngStream(5, 3)
        child = parent.substream(1)
        assert child.spawn_key == (3, 1)
        assert child.raw_bytes(32) != parent.raw_bytes(32)
        assert child.raw_bytes(32) != parent.substream(0).raw_bytes(32)

    def test_largest_seed(self):
        RngStream(SEED_LIMIT - 1, 0).generator()

    @pytest.mark.parametrize("seed, index", [(-1, 0), (SEED_LIMIT, 0), (0, -1)])
    def test_invalid(self, seed, index):
        with pytest.raises(InvalidArgumentError):
            RngStream(seed, index)
