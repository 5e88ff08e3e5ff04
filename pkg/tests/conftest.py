"""
Pytest configuration and fixtures for sandwich_sde tests.
"""

import os

import pytest

from sandwich_sde.core import TimeGrid
from sandwich_sde.drift import cir_cev_drift, simulation_one_model, simulation_two_model


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "slow: desk-scale Monte Carlo run (set SANDWICH_RUN_SLOW=1)")
    config.addinivalue_line("markers", "unit: mark test as unit test")


def pytest_collection_modifyitems(config, items):
    """Auto-mark desk-scale runs as slow."""
    for item in items:
        if "desk_scale" in item.name:
            item.add_marker(pytest.mark.slow)


def pytest_runtest_setup(item):
    """Skip slow runs unless they were asked for."""
    if item.get_closest_marker("slow") and os.environ.get("SANDWICH_RUN_SLOW") != "1":
        pytest.skip("desk-scale run; set SANDWICH_RUN_SLOW=1")


@pytest.fixture
def fcir_model():
    """b(y) = 1.5/y − 0.5y on y > 0 (κ=3, θ=1 fCIR), λ = 0.65."""
    return simulation_one_model(0.65)


@pytest.fixture
def cir_model():
    """cir_cev_drift(1.5, 0.5, ½) at λ = 0.69."""
    return cir_cev_drift(1.5, 0.5, 0.5, 0.69)


@pytest.fixture
def cosine_band_model():
    return simulation_two_model(0.65)


@pytest.fixture
def unit_grid():
    return TimeGrid(1.0, 10)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep SANDWICH_* defaults predictable and outputs inside tmp_path."""
    for name in list(os.environ):
        if name.startswith("SANDWICH_") and name != "SANDWICH_RUN_SLOW":
            monkeypatch.delenv(name)
    monkeypatch.setenv("SANDWICH_OUTPUT_URL", str(tmp_path / "runs"))
    monkeypatch.setenv("SANDWICH_WORKERS", "1")
