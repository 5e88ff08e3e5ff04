import numpy as np
import pytest

from sandwich_sde.analysis import upper_moment_estimate
from sandwich_sde.analysis.moments import MomentEstimate, inverse_distance_sup
from sandwich_sde.common.errors import DomainError, InvalidArgumentError
from sandwich_sde.core import SamplePath, TimeGrid
from sandwich_sde.drift import zero_drift

GRID = TimeGrid(1.0, 4)


def constant_paths(value, count=4):
    return [SamplePath(GRID, np.full(5, value)) for _ in range(count)]


class TestUpperMomentEstimate:
    def test_degenerate_sample(self, cir_model):
        report = upper_moment_estimate(constant_paths(2.0), 2.0, cir_model)
        assert report.sup_moment.mean == pytest.approx(4.0)
        assert report.sup_moment.stderr == 0.0
        assert report.inverse_moment.mean == pytest.approx(0.25)
        assert report.inverse_moment.stderr == 0.0
        assert report.stable

    def test_regular_model_has_no_inverse_moment(self):
        report = upper_moment_estimate(constant_paths(-3.0), 1.0, zero_drift())
        assert report.sup_moment.mean == pytest.approx(3.0)
        assert report.inverse_moment is None
        assert report.to_dict()["inverse_moment"] is None

    def test_sample_statistics(self, cir_model):
        paths = constant_paths(1.0, 2) + constant_paths(3.0, 2)
        report = upper_moment_estimate(paths, 1.0, cir_model)
        assert report.sup_moment.mean == pytest.approx(2.0)
        assert report.sup_moment.stderr == pytest.approx(np.std([1.0, 1.0, 3.0, 3.0], ddof=1) / 2.0)
        assert report.sup_moment.half_mean == pytest.approx(1.0)

    def test_touching_bound(self, cir_model):
        values = np.array([1.0, 0.5, 0.0, 0.5, 1.0])
        paths = constant_paths(1.0, 1) + [SamplePath(GRID, values)]
        with pytest.raises(DomainError) as excinfo:
            upper_moment_estimate(paths, 1.0, cir_model)
        assert excinfo.value.index == 2

    @pytest.mark.parametrize("r", [0.0, -1.0])
    def test_order_must_be_positive(self, cir_model, r):
        with pytest.raises(InvalidArgumentError):
            upper_moment_estimate(constant_paths(2.0), r, cir_model)

    def test_needs_two_paths(self, cir_model):
        with pytest.raises(InvalidArgumentError):
            upper_moment_estimate(constant_paths(2.0, 1), 1.0, cir_model)


def test_inverse_distance_uses_nearer_bound(cosine_band_model):
    path = SamplePath(GRID, np.asarray(cosine_band_model.psi(GRID.nodes)) - 0.5)
    assert inverse_distance_sup(path, cosine_band_model, 1.0) == pytest.approx(2.0)


def test_unstable_when_halves_disagree():
    estimate = MomentEstimate(mean=10.0, stderr=0.1, half_mean=1.0, half_stderr=0.1)
    assert not estimate.stable
    assert estimate.to_dict()["stable"] is False
