from sandwich_sde.analysis.certificates import (
    BoundCertificate,
    CertificateKind,
    certificate_study,
    lower_bound_certificate,
    upper_bound_certificate,
    upper_bound_constants,
)
from sandwich_sde.analysis.constants import (
    adjusted_holder_constant,
    beta_constant,
    grr_constant,
    lower_bound_scale,
    m3_constant,
)
from sandwich_sde.analysis.holder import HolderEstimate, estimate_holder
from sandwich_sde.analysis.moments import MomentReport, upper_moment_estimate
from sandwich_sde.analysis.report import PowerLawFit, StudyReport, fit_power_law
from sandwich_sde.analysis.studies import convergence_study, moment_study, tail_exponent_study
from sandwich_sde.analysis.transform import cev_transform, young_residual

__all__ = [
    "BoundCertificate",
    "CertificateKind",
    "HolderEstimate",
    "MomentReport",
    "PowerLawFit",
    "StudyReport",
    "adjusted_holder_constant",
    "beta_constant",
    "certificate_study",
    "cev_transform",
    "convergence_study",
    "estimate_holder",
    "fit_power_law",
    "grr_constant",
    "lower_bound_certificate",
    "lower_bound_scale",
    "m3_constant",
    "moment_study",
    "tail_exponent_study",
    "upper_bound_certificate",
    "upper_bound_constants",
    "upper_moment_estimate",
    "young_residual",
]
