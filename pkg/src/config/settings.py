"""
Centralized Application Configuration

This module uses Pydantic's BaseSettings to load and validate toolkit
settings from environment variables (typically stored in a .env file).

Every bound, default and naming convention used by the algebra engine
and the command-line front end lives here, so that a session run is
fully determined by its input file plus this configuration.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Toolkit settings model. Loads values from .env files.
    """

    # -----------------------------------------------------------------
    # PROJECT CONFIGURATION
    # -----------------------------------------------------------------
    PROJECT_NAME: str = Field(
        default="FormalModelToolkit",
        description="Name reported in logs and JSON output"
    )
    LOG_LEVEL: str = Field(
        default="WARNING",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    # -----------------------------------------------------------------
    # RING CONVENTIONS
    # -----------------------------------------------------------------
    UNIFORMIZER_NAME: str = Field(
        default="w",
        description="Variable name reserved for the pseudo-uniformizer"
    )
    COEFFICIENT_FIELD: str = Field(
        default="q",
        description="Coefficient field: 'q' for rationals or 'fp:<p>'"
    )
    MONOMIAL_ORDER: str = Field(
        default="grevlex",
        description="Order used when printing Groebner bases (grevlex|lex)"
    )

    # -----------------------------------------------------------------
    # SEARCH BOUNDS
    # -----------------------------------------------------------------
    DEGREE_BOUND: int = Field(
        default=6,
        description="Total degree bound of the integral-closure search"
    )
    EXTENSION_BOUND: int = Field(
        default=16,
        description=(
            "Largest power of the ideal of definition tried when "
            "extending an admissible ideal from a basic open"
        )
    )
    NORMALIZATION_MAX_STEPS: int = Field(
        default=8,
        description="Maximal number of adjoined fractions in normalize"
    )
    UNIFORMITY_MAX_POWER: int = Field(
        default=4,
        description="Largest power tried by the uniformity check"
    )
    CHART_REFINEMENT_BOUND: int = Field(
        default=16,
        description="Largest chart index tried when comparing chart systems"
    )

    # -----------------------------------------------------------------
    # OUTPUT
    # -----------------------------------------------------------------
    JSON_FORMAT_VERSION: int = Field(
        default=1,
        description="Value of the top-level 'format' key in JSON output"
    )

    @field_validator("MONOMIAL_ORDER")
    @classmethod
    def validate_order(cls, v: str) -> str:
        if v not in ("grevlex", "lex"):
            raise ValueError("MONOMIAL_ORDER must be 'grevlex' or 'lex'")
        return v

    @field_validator("DEGREE_BOUND", "EXTENSION_BOUND", "NORMALIZATION_MAX_STEPS",
                     "UNIFORMITY_MAX_POWER", "CHART_REFINEMENT_BOUND")
    @classmethod
    def validate_bound(cls, v: int) -> int:
        if v < 0:
            raise ValueError("Search bounds must be non-negative")
        return v

    class Config:
        # This tells Pydantic to load variables from a .env file
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"  # Ignore extra fields in .env


# Create a single, globally accessible settings instance
# Other modules can import this object directly:
# from src.config.settings import settings
settings = Settings()
