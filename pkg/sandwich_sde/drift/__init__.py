from sandwich_sde.drift.bounds import BoundFunction, constant_bound, cosine_bound, exponential_bound
from sandwich_sde.drift.families import (
    AffineTerm,
    cir_cev_drift,
    linear_drift,
    mixed_cev_drift,
    one_sided_power_drift,
    simulation_one_model,
    simulation_three_model,
    simulation_two_model,
    two_sided_power_drift,
    zero_drift,
)
from sandwich_sde.drift.model import DriftModel, Sidedness
from sandwich_sde.drift.validation import AssumptionCheck, ValidationReport, validate_assumptions

__all__ = [
    "AffineTerm",
    "AssumptionCheck",
    "BoundFunction",
    "DriftModel",
    "Sidedness",
    "ValidationReport",
    "cir_cev_drift",
    "constant_bound",
    "cosine_bound",
    "exponential_bound",
    "linear_drift",
    "mixed_cev_drift",
    "one_sided_power_drift",
    "simulation_one_model",
    "simulation_three_model",
    "simulation_two_model",
    "two_sided_power_drift",
    "validate_assumptions",
    "zero_drift",
]
