import numpy as np
import pytest

from sandwich_sde.analysis import estimate_holder
from sandwich_sde.analysis.holder import max_ratio
from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core import RngStream, SamplePath, TimeGrid
from sandwich_sde.noise import NoiseSpec, sample_noise


def test_constant_path():
    grid = TimeGrid(1.0, 16)
    estimate = estimate_holder(SamplePath(grid, np.full(17, 3.0)), 0.5, 4.0)
    assert estimate.max_ratio == 0.0
    assert estimate.grr == 0.0
    assert estimate.argmax is None


def test_linear_path():
    grid = TimeGrid(1.0, 16)
    estimate = estimate_holder(SamplePath(grid, grid.nodes), 0.5, 4.0)
    assert estimate.max_ratio == pytest.approx(1.0)
    assert estimate.argmax == (0, 16)
    assert estimate.grr_consistent


@pytest.mark.parametrize("order, p", [(0.75, 4.0), (0.9, 5.0), (0.0, 4.0), (0.5, 0.5)])
def test_invalid_orders(order, p):
    grid = TimeGrid(1.0, 4)
    with pytest.raises(InvalidArgumentError):
        estimate_holder(SamplePath(grid, grid.nodes), order, p)


def test_adjusted_constant(cir_model):
    grid = TimeGrid(1.0, 64)
    noise = sample_noise(NoiseSpec("fbm", hurst=0.7, scale=0.5), grid, RngStream(0, 0))
    estimate = estimate_holder(noise, 0.65, 4.0, cir_model, 1.0)
    assert estimate.adjusted >= estimate.max_ratio
    assert estimate_holder(noise, 0.65, 4.0).adjusted is None


def test_use_selects_estimate():
    grid = TimeGrid(1.0, 16)
    estimate = estimate_holder(SamplePath(grid, grid.nodes), 0.5, 4.0)
    assert estimate.constant("grr") == estimate.grr
    with pytest.raises(InvalidArgumentError):
        estimate.constant("median")


def test_grr_dominates_on_noise_paths():
    grid = TimeGrid(1.0, 256)
    spec = NoiseSpec("fbm", hurst=0.7)
    for i in range(5):
        noise = sample_noise(spec, grid, RngStream(31, i))
        assert estimate_holder(noise, 0.6, 5.0).grr_consistent


def test_max_ratio_stable_under_refinement():
    """Refining 2¹⁰ → 2¹² adds node pairs but never doubles the max-ratio."""
    spec = NoiseSpec("fbm", hurst=0.7)
    order = 0.7 - 2.0 / 40.0 - 0.01
    fine_grid, coarse_grid = TimeGrid(1.0, 2**12), TimeGrid(1.0, 2**10)
    for i in range(50):
        fine = sample_noise(spec, fine_grid, RngStream(3, i))
        coarse = fine.restrict(coarse_grid)
        fine_ratio, _ = max_ratio(fine.values, fine.times, order)
        coarse_ratio, _ = max_ratio(coarse.values, coarse.times, order)
        assert coarse_ratio <= fine_ratio * (1 + 1e-12), i
        assert fine_ratio <= 2.0 * coarse_ratio, i
