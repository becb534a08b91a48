"""Version 1 of the scenario HTTP routes."""

from app.api.v1.api import api_router

__all__ = ["api_router"]
