from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List
from functools import lru_cache
import os


class Settings(BaseSettings):
    """Application settings

    This class manages all configuration for arithdyn, using environment variables
    (prefix ``ARITHDYN_``) with the defaults used throughout the computations.
    """

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_prefix="ARITHDYN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Project settings
    PROJECT_NAME: str = "arithdyn"
    VERSION: str = "1.0.0"
    DESCRIPTION: str = "Dynamical degrees, Weil heights and canonical heights of plane polynomial maps"
    SCHEMA_VERSION: str = "arithdyn/1"

    # HTTP settings
    API_PREFIX: str = "/api"
    BACKEND_CORS_ORIGINS: List[str] = ["*"]

    # Reproducibility
    SEED: int = 0

    # Exact polynomial arithmetic
    COEFFICIENT_BIT_BUDGET: int = 10**8  # total bits per polynomial

    # Degree sequences
    PRIME_BITS: int = 60
    PRIME_RETRIES: int = 3
    DEGREE_BOUND: int = 20_000
    DEGREE_MIN_ENTRIES: int = 7  # order-two recurrence plus its held-out entries
    DEGREE_BOUND_CEILING: int = 10**6
    DEGREE_MAX_ITER: int = 24

    # Recurrences and lambda_1
    RECURRENCE_MAX_ORDER: int = 6
    RECURRENCE_HOLDOUT: int = 2
    LAMBDA1_RELATIVE_WIDTH_EXP: int = 12  # interval width <= 10**-k * lambda_1
    GROWTH_TOLERANCE: float = 1e-3

    # Topological degree
    LAMBDA2_TRIALS: int = 4
    SHEAR_MIN: int = 1
    SHEAR_MAX: int = 10**6
    TARGET_MIN: int = 10**6
    TARGET_MAX: int = 10**9

    # Heights and orbits
    DECIMAL_PRECISION_BITS: int = 128
    ORBIT_BIT_BUDGET: int = 10**7  # bits per coordinate
    MAX_ITER: int = 16
    ZERO_THRESHOLD: float = 0.05
    CANONICAL_HEIGHT_TOL: float = 1e-3
    HEIGHT_BOUND: float = 20.0
    CLASSIFY_RATIO: float = 1.01
    CLASSIFY_WINDOW: int = 5
    ALPHA_TOLERANCE: float = 0.1
    EXACT_OUTPUT_BITS: int = 4096  # larger orbit coordinates are reported by height only

    # Example map catalog
    DATA_DIR: str = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data")
    CATALOG_FILE: str = "example_maps.json"

    # Logging settings
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
