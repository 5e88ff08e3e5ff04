import math

import numpy as np
import pytest

from sandwich_sde.analysis import (
    CertificateKind,
    HolderEstimate,
    certificate_study,
    lower_bound_certificate,
    upper_bound_certificate,
    upper_bound_constants,
)
from sandwich_sde.analysis.certificates import default_grr_exponent, lower_bound_gap
from sandwich_sde.common.errors import AssumptionViolationError, InvalidArgumentError
from sandwich_sde.core import SamplePath, TimeGrid
from sandwich_sde.drift import constant_bound, linear_drift, one_sided_power_drift
from sandwich_sde.noise import NoiseSpec

GRID = TimeGrid(1.0, 8)


@pytest.fixture
def cubic():
    return one_sided_power_drift(1.0, 3.0, constant_bound(0.0, 0.5), 0.5, c=1.0, y_star=1.0)


def holder(order=0.5, max_ratio=1.0, adjusted=None, grid=GRID):
    return HolderEstimate(order, 4.0, 10.0, max_ratio, grid, None, adjusted)


class TestLowerCertificate:
    def test_unit_adjusted_constant(self, cubic):
        """With unit adjusted constant the certificate sits at distance L above the bound."""
        certificate = lower_bound_certificate(cubic, holder(adjusted=1.0), 1.0)
        assert certificate.kind == CertificateKind.LOWER
        np.testing.assert_allclose(certificate.lower, np.full(9, 1.0 / math.sqrt(2.0)))
        assert certificate.upper is None
        assert certificate.constants["M3"] == pytest.approx(math.sqrt(2.0))

    def test_gap_shrinks_with_holder_constant(self, cubic):
        gaps = [lower_bound_gap(cubic, 0.5, adjusted) for adjusted in (0.5, 1.0, 2.0, 8.0)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[2] == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)))

    def test_assembles_adjusted_constant(self, cubic):
        certificate = lower_bound_certificate(cubic, holder(max_ratio=10.0), 1.0)
        assert certificate.constants["adjusted_holder"] == 10.0

    def test_check_counts_violations(self, cubic):
        certificate = lower_bound_certificate(cubic, holder(adjusted=1.0), 1.0)
        values = np.ones(9)
        values[3] = 0.5
        checked = certificate.check(SamplePath(GRID, values))
        assert checked.violations == 1
        assert checked.worst_margin == pytest.approx(1.0 / math.sqrt(2.0) - 0.5)
        assert checked.fraction == pytest.approx(1.0 / 9.0)
        assert certificate.check(SamplePath(GRID, np.ones(9))).worst_margin == 0.0

    def test_sandwich(self, cosine_band_model):
        """Two-sided models get both certificate curves."""
        certificate = lower_bound_certificate(cosine_band_model, holder(order=0.65, adjusted=20.0), 2.5)
        assert certificate.kind == CertificateKind.SANDWICH
        gap = certificate.constants["gap"]
        np.testing.assert_allclose(certificate.upper, np.asarray(cosine_band_model.psi(GRID.nodes)) - gap)
        above = np.asarray(cosine_band_model.psi(GRID.nodes)) - 0.5 * gap
        assert certificate.check(SamplePath(GRID, above)).violations == 9

    def test_degenerate_exponent(self, cir_model):
        with pytest.raises(AssumptionViolationError):
            lower_bound_certificate(cir_model, holder(order=0.5, adjusted=1.0), 1.0)

    def test_regular_model(self):
        with pytest.raises(InvalidArgumentError):
            lower_bound_certificate(linear_drift(1.0), holder(adjusted=1.0), 1.0)

    def test_grid_mismatch(self, cubic):
        certificate = lower_bound_certificate(cubic, holder(adjusted=1.0), 1.0)
        with pytest.raises(InvalidArgumentError):
            certificate.check(SamplePath(TimeGrid(1.0, 4), np.ones(5)))


class TestUpperCertificate:
    def test_constants(self, cir_model):
        """CIR with Y0 = 1: eta = 1/2, c_eta = 6.5 and max b = 2.75."""
        constants = upper_bound_constants(cir_model, 1.0)
        assert constants.eta == 0.5
        assert constants.a_t == pytest.approx(12.5)
        assert constants.m1 == pytest.approx(14.0 * math.exp(12.5))
        assert constants.m2 == pytest.approx(math.exp(12.5))

    def test_higher_moments(self, cir_model):
        first = upper_bound_constants(cir_model, 1.0)
        second = upper_bound_constants(cir_model, 1.0, r=2.0)
        assert second.m1 == pytest.approx(2.0 * first.m1**2)
        assert second.m2 == pytest.approx(2.0 * first.m2**2)

    def test_certificate(self, cir_model):
        certificate = upper_bound_certificate(cir_model, holder(order=0.69, max_ratio=2.0), 1.0)
        assert certificate.kind == CertificateKind.UPPER
        np.testing.assert_allclose(certificate.upper, np.full(9, 16.0 * math.exp(12.5)))
        assert certificate.check(SamplePath(GRID, np.ones(9))).violations == 0

    def test_two_sided_rejected(self, cosine_band_model):
        with pytest.raises(InvalidArgumentError):
            upper_bound_constants(cosine_band_model, 2.5)

    @pytest.mark.parametrize("y0, r", [(0.0, 1.0), (1.0, 0.0)])
    def test_invalid(self, cir_model, y0, r):
        with pytest.raises(InvalidArgumentError):
            upper_bound_constants(cir_model, y0, r)


@pytest.mark.parametrize("order, expected", [(0.5, 4.0), (0.65, 4.0), (0.85, 7.0)])
def test_default_grr_exponent(order, expected):
    p = default_grr_exponent(order)
    assert p == expected
    assert order + 1.0 / p < 1.0


class TestCertificateStudy:
    def test_report(self, fcir_model):
        spec = NoiseSpec("fbm", hurst=0.7, scale=0.5)
        report = certificate_study(fcir_model, spec, TimeGrid(1.0, 128), 20, 1.0, paths=3, seed=8, workers=1)
        assert report.kind == "certificate"
        assert report.parameters["order"] == pytest.approx(0.65)
        assert report.parameters["p"] == 4.0
        assert len(report.metrics["violations"]) == 3
        assert all(gap > 0 for gap in report.metrics["gap"])
        assert 0.0 <= report.metrics["violation_fraction"] <= 1.0
        assert report.passed == (
            report.metrics["violation_fraction"] <= 0.01 and report.metrics["worst_margin"] <= 1e-3
        )

    def test_needs_paths(self, fcir_model):
        with pytest.raises(InvalidArgumentError):
            certificate_study(fcir_model, NoiseSpec("brownian"), TimeGrid(1.0, 16), 20, 1.0, paths=0, seed=0)
