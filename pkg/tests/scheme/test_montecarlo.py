import numpy as np
import pytest

from sandwich_sde.common.errors import InvalidArgumentError
from sandwich_sde.core import RngStream, TimeGrid
from sandwich_sde.drift import simulation_three_model
from sandwich_sde.noise import NoiseSpec, sample_noise
from sandwich_sde.scheme import euler_semiheuristic, run_tasks, simulate_paths, truncate_drift
from sandwich_sde.scheme.montecarlo import split_batches

GRID = TimeGrid(1.0, 256)
SPEC = NoiseSpec("fbm", hurst=0.7, scale=0.5)


def values(runs):
    return np.vstack([run.result.path.values for run in runs])


def square(x):
    return x * x


class TestSplitBatches:
    def test_fixed_size(self):
        assert split_batches([0, 1, 2, 3, 4], 2) == [(0, 1), (2, 3), (4,)]

    def test_minimum_size_one(self):
        assert split_batches([0, 1], 0) == [(0,), (1,)]

    def test_empty(self):
        assert split_batches([], 4) == []


class TestRunTasks:
    def test_serial_order(self):
        assert run_tasks(square, [3, 1, 2]) == [9, 1, 4]

    def test_pool_order(self):
        assert run_tasks(abs, [-3, 1, -2, 0, -5], workers=2) == [3, 1, 2, 0, 5]


class TestSimulatePaths:
    def test_ordered_by_index(self, fcir_model):
        runs = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=3, paths=7, workers=1, batch_size=3)
        assert [run.index for run in runs] == list(range(7))
        assert all(run.noise is None for run in runs)

    def test_path_uses_its_own_stream(self, fcir_model):
        runs = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=3, paths=4, workers=1, batch_size=4)
        noise = sample_noise(SPEC, GRID, RngStream(3, 2))
        single = euler_semiheuristic(truncate_drift(fcir_model, 20), noise, 1.0)
        np.testing.assert_allclose(runs[2].result.path.values, single.path.values, rtol=1e-13)

    def test_worker_count_does_not_matter(self, fcir_model):
        serial = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=11, paths=8, workers=1, batch_size=2)
        pooled = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=11, paths=8, workers=2, batch_size=2)
        np.testing.assert_array_equal(values(serial), values(pooled))

    def test_batch_size_does_not_matter(self, fcir_model):
        small = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=11, paths=6, workers=1, batch_size=1)
        large = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=11, paths=6, workers=1, batch_size=6)
        np.testing.assert_allclose(values(small), values(large), rtol=1e-13)

    def test_seed_changes_paths(self, fcir_model):
        a = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=1, paths=2, workers=1)
        b = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=2, paths=2, workers=1)
        assert not np.array_equal(values(a), values(b))

    def test_keep_noise(self, fcir_model):
        runs = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=5, paths=3, workers=1, keep_noise=True)
        np.testing.assert_array_equal(runs[1].noise.values, sample_noise(SPEC, GRID, RngStream(5, 1)).values)

    def test_shift_enters_drift(self, fcir_model):
        plain = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=5, paths=3, workers=1)
        shifted = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=5, paths=3, workers=1, shift=-0.05)
        np.testing.assert_allclose(values(shifted)[:, 1], values(plain)[:, 1] - 0.05 * GRID.mesh, rtol=1e-12)

    def test_defaults_from_settings(self, fcir_model, monkeypatch):
        monkeypatch.setenv("SANDWICH_BATCH_SIZE", "2")
        runs = simulate_paths(fcir_model, SPEC, GRID, 20, 1.0, seed=5, paths=5)
        assert len(runs) == 5

    def test_strict_level(self):
        with pytest.raises(InvalidArgumentError):
            simulate_paths(simulation_three_model(0.65), SPEC, GRID, 20, 0.0, seed=0, paths=1, workers=1)


@pytest.mark.parametrize("model_fixture, scale, y0", [("fcir_model", 0.5, 1.0), ("cosine_band_model", 1.0, 2.5)])
def test_confinement(request, model_fixture, scale, y0):
    model = request.getfixturevalue(model_fixture)
    grid = TimeGrid(1.0, 2048)
    spec = NoiseSpec("fbm", hurst=0.7, scale=scale)
    runs = simulate_paths(model, spec, grid, 20, y0, seed=2024, paths=20, workers=1)
    assert sum(run.result.exited for run in runs) == 0


def test_shrinking_band_below_minimum_level():
    grid = TimeGrid(1.0, 2048)
    spec = NoiseSpec("fbm", hurst=0.7)
    runs = simulate_paths(simulation_three_model(0.65), spec, grid, 20, 0.0, seed=2024, paths=10, workers=1, strict=False)
    assert sum(run.result.exited for run in runs) == 0
