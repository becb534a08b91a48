"""Dependencies for FastAPI routes."""

from typing import Annotated

from fastapi import Depends

from app.models import ScenarioConfig, ScenarioRunRequest
from app.services.config_loader import apply_overrides


def get_default_config() -> ScenarioConfig:
    """Scenario used when a request carries no config of its own."""
    return ScenarioConfig()


def resolve_config(request: ScenarioRunRequest, default: ScenarioConfig) -> ScenarioConfig:
    """
    Request config (or the default) with its dotted overrides applied.

    Raises:
        ConfigError: Unknown override key or violated invariant
    """
    base = request.config if request.config is not None else default
    return apply_overrides(base, request.overrides)


# Type Aliases
DefaultConfigDep = Annotated[ScenarioConfig, Depends(get_default_config)]
