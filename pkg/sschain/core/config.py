"""
Configuration settings for sschain
"""

from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application settings
    APP_NAME: str = "sschain"

    # Logging settings
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = True

    # Default tolerance budget
    DEFAULT_ABS_TOL: float = 1e-10
    DEFAULT_REL_TOL: float = 1e-10
    DEFAULT_MAX_TERMS: int = 2_000_000
    DEFAULT_MAX_QUAD_EVALS: int = 500

    # Series evaluation
    SAMPLE_CHUNK: int = 4096
    BOUND_ONLY_ARG: float = 2.0 ** 40
    THREADS: Optional[int] = None

    # Continuum approximation
    LAPLACIAN_TAU_CUT: float = 1e-3
    EPSILON_WARN: float = 0.01
    EPSILON_MAX: float = 0.1

    model_config = SettingsConfigDict(
        env_prefix="SSCHAIN_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


# Create settings instance
settings = Settings()
