from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""

    # Worker pool
    threads: int = Field(default=1, ge=1)

    # Enumeration budgets
    oracle_budget: int = Field(default=10**7, ge=1)
    search_budget: int = Field(default=10**8, ge=1)

    # Input validation
    matrix_validation_limit: int = 500
    aspect_warning_exponent: float = 4.0

    # Bicriteria fallback when the oracle is unaffordable
    assume_alpha: Optional[float] = Field(default=None, ge=1.0)

    # Output
    log_level: str = "INFO"
    results_dir: str = "./results"

    model_config = SettingsConfigDict(
        env_prefix="ROBUSTKZ_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Create settings instance
settings = Settings()
