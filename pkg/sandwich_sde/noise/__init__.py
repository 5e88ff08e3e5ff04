from sandwich_sde.noise.fbm import fbm_autocovariance, fbm_covariance, fbm_covariance_matrix
from sandwich_sde.noise.sampling import Generator, NoiseKind, NoiseSpec, sample_noise, sample_noise_paths

__all__ = [
    "fbm_autocovariance",
    "fbm_covariance",
    "fbm_covariance_matrix",
    "Generator",
    "NoiseKind",
    "NoiseSpec",
    "sample_noise",
    "sample_noise_paths",
]
