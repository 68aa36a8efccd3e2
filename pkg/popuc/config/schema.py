"""Pydantic configuration models for popuc.

All config is loaded from ~/.popuc/config.json and can be overridden
via POPUC_ prefixed environment variables (nested keys joined by "__",
e.g. POPUC_VERIFICATION__SAMPLES=64).

The algebraic cancellation thresholds are fixed in the algebra package;
what lives here is everything a user may reasonably tune per run: root
finder effort, verification sampling and tolerances, output format.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic_settings.main import JsonConfigSettingsSource


def _is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


class NumericsConfig(BaseModel):
    """Root finding and quadrature effort."""

    root_max_iterations: int = Field(
        default=500,
        ge=10,
        le=10_000,
        description="Maximum Aberth-Ehrlich sweeps before giving up on convergence.",
    )
    root_tolerance: float = Field(
        default=1e-14,
        gt=0.0,
        le=1e-6,
        description="Relative correction size at which a root counts as converged.",
    )
    cluster_tolerance: float = Field(
        default=1e-6,
        gt=0.0,
        le=1e-2,
        description="Relative distance below which computed roots are merged into one multiple root.",
    )
    szego_quadrature_points: int = Field(
        default=4096,
        ge=256,
        description="Grid size for the quadrature Szego recursion of rational weights.",
    )

    @field_validator("szego_quadrature_points")
    @classmethod
    def _grid_power_of_two(cls, value: int) -> int:
        if not _is_power_of_two(value):
            raise ValueError("szego_quadrature_points must be a power of two")
        return value


class VerificationConfig(BaseModel):
    """Sampling and pass thresholds for identity checks."""

    residual_tolerance: float = Field(
        default=1e-8, gt=0.0, description="Relative residual accepted by verify_ode."
    )
    identity_tolerance: float = Field(
        default=1e-9,
        gt=0.0,
        description="Relative residual accepted for the first-order system and derivative identity.",
    )
    samples: int = Field(default=32, ge=4, le=4096, description="Sample points per identity check.")
    exterior_radius: float = Field(
        default=1.5, gt=1.0, description="Sampling circle radius for the exterior continuation."
    )
    interior_radius: float = Field(
        default=0.5, gt=0.0, lt=1.0, description="Sampling circle radius for the interior continuation."
    )
    pole_clearance: float = Field(
        default=1e-3, gt=0.0, description="Minimum distance kept between sample points and poles."
    )
    oracle_points: int = Field(
        default=2**14, ge=2**10, description="Trapezoid grid size for the quadrature oracle."
    )
    equilibrium_tolerance: float = Field(
        default=1e-8,
        gt=0.0,
        description="Per-point force tolerance; multiplied by the number of mobile points.",
    )
    collision_tolerance: float = Field(
        default=1e-8,
        gt=0.0,
        description="Generators closer than this to a mobile point are reported as collisions.",
    )
    seed: int = Field(default=0, ge=0, description="Seed for randomized sample placement.")

    @field_validator("oracle_points")
    @classmethod
    def _oracle_power_of_two(cls, value: int) -> int:
        if not _is_power_of_two(value):
            raise ValueError("oracle_points must be a power of two")
        return value


class OutputConfig(BaseModel):
    format: Literal["json", "csv"] = Field(default="json", description="Default output format.")
    indent: int = Field(default=2, ge=0, le=8, description="JSON indentation.")
    out_dir: Path = Field(
        default=Path("."), description="Directory that relative --out paths are resolved against."
    )


class LoggingConfig(BaseModel):
    log_dir: Path = Field(
        default=Path("~/.popuc/logs"), description="Directory for the rotating log file."
    )
    file_logging: bool = Field(default=True, description="Write DEBUG logs to log_dir.")


class PopucConfig(BaseSettings):
    """Root configuration.

    Loaded from ~/.popuc/config.json with POPUC_ env var overrides.
    """

    model_config = SettingsConfigDict(
        env_prefix="POPUC_",
        env_nested_delimiter="__",
        json_file=Path("~/.popuc/config.json").expanduser(),
        json_file_encoding="utf-8",
        extra="ignore",
    )

    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        """Enable JSON file loading alongside env vars and init kwargs."""
        return (
            init_settings,
            env_settings,
            JsonConfigSettingsSource(settings_cls),
        )
