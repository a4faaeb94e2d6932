"""
Configuration management using Pydantic settings.

Loads configuration from ``CONLEY_SURF_*`` environment variables and an
optional ``.env`` file. Nothing here is sensitive; the settings only steer
output styling, logging and batch sizes.
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Toolkit settings with validation and environment variable loading.

    All settings can be overridden via environment variables, e.g.
    ``CONLEY_SURF_COLOR=0`` disables colored human output.
    """

    # ==================== Output Settings ====================
    color: bool = Field(
        default=True,
        description="Colorize human-readable CLI output",
    )
    report_indent: int = Field(
        default=2,
        ge=0,
        le=8,
        description="JSON indent for reports and block files",
    )

    # ==================== Logging Settings ====================
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING",
        description="Logging level",
    )
    log_file: Optional[str] = Field(
        default=None,
        description="Optional log file path (rotated)",
    )

    # ==================== Computation Settings ====================
    jobs: int = Field(
        default=1,
        ge=1,
        le=64,
        description="Worker threads for multi-file classification",
    )
    random_budget: int = Field(
        default=120,
        ge=8,
        le=500,
        description="Default triangle budget for randomized blocks",
    )
    max_simplices: int = Field(
        default=10_000,
        ge=100,
        description="Largest complex (V+E+F) accepted by the dense GF(2) engine",
    )

    model_config = SettingsConfigDict(
        env_prefix="CONLEY_SURF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ==================== Validators ====================

    @model_validator(mode="after")
    def validate_log_file(self) -> "Settings":
        """Reject a log file path that names an existing directory"""
        if self.log_file and Path(self.log_file).is_dir():
            raise ValueError(f"log_file '{self.log_file}' is a directory")
        return self

    # ==================== Computed Properties ====================

    @property
    def log_file_path(self) -> Optional[Path]:
        """Get log file path"""
        return Path(self.log_file) if self.log_file else None


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Returns:
        Settings: Validated settings instance

    Raises:
        ValidationError: If configuration is invalid
    """
    return Settings()


def reload_settings() -> Settings:
    """
    Force reload settings (clear cache).

    Useful for testing or when the environment changes at runtime.

    Returns:
        Settings: New settings instance
    """
    get_settings.cache_clear()
    return get_settings()
