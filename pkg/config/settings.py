"""
Environment-level configuration for pnpvamp
Reads PNPVAMP_* variables (and a .env file) into a settings singleton
"""

from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from utils.constants import (
    DEFAULT_OUTPUT_ROOT,
    GAMMA_MAX,
    GAMMA_MIN,
    MC_EPSILON,
    MC_PROBES,
)

load_dotenv()


class PnpVampSettings(BaseSettings):
    """Main settings class for pnpvamp"""

    model_config = SettingsConfigDict(
        env_prefix="PNPVAMP_",
        env_file=".env",
        extra="ignore",
    )

    # Output Configuration
    output_root: str = DEFAULT_OUTPUT_ROOT

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Work pool
    default_threads: int = Field(default=1, ge=1)

    # Monte Carlo divergence defaults
    mc_probes: int = Field(default=MC_PROBES, ge=1)
    mc_epsilon: float = Field(default=MC_EPSILON, gt=0.0)

    # Precision clamps
    gamma_min: float = Field(default=GAMMA_MIN, gt=0.0)
    gamma_max: float = Field(default=GAMMA_MAX, gt=0.0)

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @model_validator(mode="after")
    def _check_clamps(self) -> "PnpVampSettings":
        if not self.gamma_min < self.gamma_max:
            raise ValueError("gamma_min must be below gamma_max")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary"""
        return self.model_dump()


# Global settings instance
settings = PnpVampSettings()
