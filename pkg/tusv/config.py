"""Configuration loaded from environment variables."""

import os
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings with TUSV_-prefixed environment variable loading."""

    model_config = SettingsConfigDict(
        env_prefix="TUSV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Mask cache
    cache_dir: Path = Path.home() / ".cache" / "tusv"
    cache_enabled: bool = True

    # Workers for sweeps and multi-form scans
    jobs: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Bounds
    list_witness_bound: int = 1000  # W for list reproduction
    scan_bound: int = 1_000_000  # N for conjecture and sum-list scans
    max_bound: int = 2**32
    witness_stream_threshold: int = 1_000_000
    parametric_x_max: int = 1000

    # Logging
    log_level: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
