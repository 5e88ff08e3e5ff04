"""
Run configuration files.

A run is described by one TOML document with the sections ``[model]``, ``[noise]``,
``[scheme]`` and optionally ``[study]`` and ``[holder]``; see docs/config.md. Every
section rejects unknown keys and is validated before any computation starts.
"""

import logging
import os
import tomllib
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from sandwich_sde.common.errors import ConfigError
from sandwich_sde.core.grid import TimeGrid
from sandwich_sde.core.rng import SEED_LIMIT
from sandwich_sde.drift import families
from sandwich_sde.drift.bounds import BoundFunction, constant_bound, cosine_bound, exponential_bound
from sandwich_sde.drift.families import AffineTerm
from sandwich_sde.drift.model import DriftModel
from sandwich_sde.noise.sampling import Generator, NoiseKind, NoiseSpec

logger = logging.getLogger(__name__)

# default Hölder order sits this far below the noise's Hölder limit
ORDER_MARGIN = 0.05


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# — bounds —


class ConstantBoundConfig(Section):
    kind: Literal["constant"]
    value: float = 0.0

    def build(self, order: float, horizon: float) -> BoundFunction:
        return constant_bound(self.value, order)


class CosineBoundConfig(Section):
    """offset + amplitude·cos(frequency·t)"""

    kind: Literal["cosine"]
    offset: float = 0.0
    amplitude: float = 1.0
    frequency: float = 1.0

    def build(self, order: float, horizon: float) -> BoundFunction:
        return cosine_bound(self.offset, self.amplitude, self.frequency, order, horizon)


class ExponentialBoundConfig(Section):
    """offset + amplitude·e^{rate·t}"""

    kind: Literal["exponential"]
    offset: float = 0.0
    amplitude: float = 1.0
    rate: float = -1.0

    def build(self, order: float, horizon: float) -> BoundFunction:
        return exponential_bound(self.offset, self.amplitude, self.rate, order, horizon)


BoundConfig = Annotated[
    Union[ConstantBoundConfig, CosineBoundConfig, ExponentialBoundConfig], Field(discriminator="kind")
]


# — models —


class ModelSection(Section):
    order: Optional[float] = Field(default=None, gt=0, lt=1, description="Hölder order λ of the noise paths")


class CirCevModel(ModelSection):
    family: Literal["cir_cev"]
    kappa: float = Field(gt=0)
    theta: float = Field(gt=0)
    alpha: float = Field(ge=0.5, lt=1)
    y_star: Optional[float] = Field(default=None, gt=0)

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.cir_cev_drift(self.kappa, self.theta, self.alpha, order, horizon, self.y_star)


class MixedCevModel(ModelSection):
    family: Literal["mixed_cev"]
    kappa: float = Field(gt=0)
    theta: float = Field(gt=0)
    nu1: float = Field(ge=0)
    alpha: float = Field(gt=0.5, lt=1)
    y_star: Optional[float] = Field(default=None, gt=0)

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.mixed_cev_drift(self.kappa, self.theta, self.nu1, self.alpha, order, horizon, self.y_star)


class TwoSidedPowerModel(ModelSection):
    """a₁/(y − φ)^γ − a₂/(ψ − y)^γ − (a3_slope·y + a3_intercept)"""

    family: Literal["two_sided_power"]
    a1: float = Field(gt=0)
    a2: float = Field(gt=0)
    a3_slope: float = 0.0
    a3_intercept: float = 0.0
    gamma: float = Field(gt=0)
    lower: BoundConfig
    upper: BoundConfig
    y_star: Optional[float] = Field(default=None, gt=0)
    name: str = "two_sided_power"

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.two_sided_power_drift(
            self.a1,
            self.a2,
            AffineTerm(self.a3_slope, self.a3_intercept),
            self.gamma,
            self.lower.build(order, horizon),
            self.upper.build(order, horizon),
            order,
            horizon,
            self.y_star,
            self.name,
        )


class CustomModel(ModelSection):
    """One-sided a₁/(y − φ)^γ − a₃ with declared c and y_*; not checked until validation."""

    family: Literal["custom"]
    a1: float = Field(gt=0)
    a3_slope: float = 0.0
    a3_intercept: float = 0.0
    gamma: float = Field(gt=0)
    c: float = Field(gt=0)
    y_star: float = Field(gt=0)
    lower: BoundConfig = ConstantBoundConfig(kind="constant")
    name: str = "custom"

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.one_sided_power_drift(
            self.a1,
            self.gamma,
            self.lower.build(order, horizon),
            order,
            self.c,
            self.y_star,
            AffineTerm(self.a3_slope, self.a3_intercept),
            horizon,
            self.name,
        )


class PresetModel(ModelSection):
    family: Literal["preset"]
    name: Literal["simulation_one", "simulation_two", "simulation_three"]

    def build(self, order: float, horizon: float) -> DriftModel:
        return getattr(families, f"{self.name}_model")(order, horizon)


class ZeroModel(ModelSection):
    family: Literal["zero"]

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.zero_drift(order, horizon)


class LinearModel(ModelSection):
    family: Literal["linear"]
    slope: float
    intercept: float = 0.0

    def build(self, order: float, horizon: float) -> DriftModel:
        return families.linear_drift(self.slope, self.intercept, order, horizon)


ModelConfig = Annotated[
    Union[CirCevModel, MixedCevModel, TwoSidedPowerModel, CustomModel, PresetModel, ZeroModel, LinearModel],
    Field(discriminator="family"),
]


# — noise and scheme —


class NoiseConfig(Section):
    kind: NoiseKind = NoiseKind.FBM
    hurst: float = Field(default=0.5, gt=0, lt=1)
    nu1: float = Field(default=0.0, ge=0)
    nu2: float = Field(default=0.0, ge=0)
    scale: float = Field(default=1.0, ge=0)
    generator: Generator = Generator.CIRCULANT

    def build(self) -> NoiseSpec:
        return NoiseSpec(self.kind, self.hurst, self.nu1, self.nu2, self.scale, self.generator)


class SchemeConfig(Section):
    level: int = Field(default=20, ge=1, description="Truncation level n")
    steps: int = Field(default=1024, ge=1, description="Grid steps N")
    horizon: float = Field(default=1.0, gt=0, description="Time horizon T")
    initial: float = Field(default=1.0, description="Initial value Y0")
    strict_level: bool = Field(default=True, description="Reject levels below n0")


# — studies —


class ConvergenceStudyConfig(Section):
    kind: Literal["convergence"]
    levels: List[int] = Field(min_length=3)
    steps: List[int] = Field(min_length=3)
    reference_steps: Optional[int] = Field(default=None, ge=1)
    min_order: float = Field(default=0.5, gt=0)


class TailStudyConfig(Section):
    kind: Literal["tail"]
    eps: List[float] = Field(min_length=4)
    order: Optional[float] = Field(default=None, gt=0, lt=1)
    p: float = Field(default=40.0, ge=1)


class MomentsStudyConfig(Section):
    kind: Literal["moments"]
    orders: List[float] = Field(default=[1.0, 2.0], min_length=1)

    @field_validator("orders")
    def validate_orders(cls, v):
        if any(r <= 0 for r in v):
            raise ValueError(f"moment orders must be positive, got {v}")
        return v


class CertificateStudyConfig(Section):
    kind: Literal["certificate"]
    order: Optional[float] = Field(default=None, gt=0, lt=1)
    p: Optional[float] = Field(default=None, ge=1)
    max_fraction: float = Field(default=0.01, ge=0, le=1)
    max_margin: float = Field(default=1e-3, ge=0)


StudyConfig = Annotated[
    Union[ConvergenceStudyConfig, TailStudyConfig, MomentsStudyConfig, CertificateStudyConfig],
    Field(discriminator="kind"),
]


class HolderConfig(Section):
    order: float = Field(gt=0, lt=1)
    p: float = Field(default=4.0, ge=1)
    input: Optional[str] = None

    @model_validator(mode="after")
    def validate_exponents(self):
        if self.order + 1.0 / self.p >= 1.0:
            raise ValueError(f"order + 1/p = {self.order + 1.0 / self.p:g} must be below 1")
        return self


class RunConfig(Section):
    seed: Optional[int] = Field(default=None, ge=0, lt=SEED_LIMIT)
    paths: int = Field(default=1, ge=1)
    output: Optional[str] = None
    workers: Optional[int] = Field(default=None, ge=1)
    write_noise: bool = False
    model: Optional[ModelConfig] = None
    noise: NoiseConfig = NoiseConfig()
    scheme: SchemeConfig = SchemeConfig()
    study: Optional[StudyConfig] = None
    holder: Optional[HolderConfig] = None

    def holder_order(self) -> float:
        if self.model is not None and self.model.order is not None:
            return self.model.order
        return self.build_noise().holder_limit - ORDER_MARGIN

    def build_noise(self) -> NoiseSpec:
        return self.noise.build()

    def build_model(self) -> DriftModel:
        if self.model is None:
            raise ConfigError("model: section is required for this command")
        return self.model.build(self.holder_order(), self.scheme.horizon)

    def build_grid(self) -> TimeGrid:
        return TimeGrid(self.scheme.horizon, self.scheme.steps)


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_run_config(data: dict, source: str = "<config>") -> RunConfig:
    """
    Validate a decoded configuration document.

    Raises:
        ConfigError: Naming the source and the key path of every invalid entry.
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(f"{_location(err)}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"{source}: {problems}") from e


def load_run_config(path: Union[str, os.PathLike]) -> RunConfig:
    """
    Read and validate a TOML run configuration.

    Raises:
        ConfigError: If the file is missing, is not valid TOML, or fails validation.
    """
    source = os.fspath(path)
    try:
        with open(source, "rb") as f:
            data = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"{source}: cannot read configuration ({e.strerror or e})") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{source}: {e}") from e
    config = parse_run_config(data, source)
    logger.debug(f"Loaded run configuration from {source}")
    return config
