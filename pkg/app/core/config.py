"""Application configuration."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.version import __version__


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables or ``.env``."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application settings
    APP_NAME: str = "TUAV CBF Safety Simulator"
    APP_VERSION: str = Field(default=__version__)
    APP_DESCRIPTION: str = "Closed-loop CBF-QP safety filter simulations for tethered UAVs"
    DEBUG: bool = Field(default=False)
    LOG_LEVEL: str = Field(default="INFO", description="Root log level for the CLI")

    # API settings
    API_V1_PREFIX: str = "/api/v1"

    # Output settings
    OUTPUT_DIR: str = Field(default="runs", description="Default directory for emitted logs")
    DEFAULT_FORMAT: str = Field(default="csv", description="Default trajectory emission format")
    SUITE_REPORT_NAME: str = Field(
        default="suite_report.json",
        description="File name of the suite-level invariant report",
    )


# Global settings instance
settings = Settings()
