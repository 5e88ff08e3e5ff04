import logging
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}


class Settings(BaseSettings):
    """
    Process-wide defaults loaded from ``SANDWICH_*`` environment variables.

    Run configuration files and CLI flags take precedence over these values.
    """

    # — Monte Carlo execution —
    workers: int = Field(default=1, ge=1, description="Worker processes used for path simulation")

    batch_size: int = Field(
        default=16,
        ge=1,
        description="Paths simulated together in one worker task; fixed so results do not depend on workers",
    )

    default_seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed when neither flag nor config sets one")

    # — Output —
    output_url: str = Field(default="runs", description="Directory or fsspec URL that receives run artifacts")

    log_level: str = Field(default="INFO", description="Level for the sandwich_sde loggers")

    # — Numerics —
    delta_resolution: int = Field(
        default=1024,
        ge=1,
        description="Time nodes scanned when computing the truncation gap and the level n0",
    )

    validation_samples: int = Field(default=8, ge=1, description="Samples per grid cell for assumption checks")

    model_config = SettingsConfigDict(
        env_prefix="SANDWICH_",
        case_sensitive=False,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("log_level")
    def validate_log_level(cls, v):
        """Validate the log level name."""
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Invalid log level '{v}'. Valid options: {sorted(LOG_LEVELS)}")
        return level


def __getattr__(name: str) -> Any:
    if name == "settings":
        return Settings()
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
