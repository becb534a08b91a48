"""API v1 endpoint routers."""

from app.api.v1.endpoints import scenarios

__all__ = ["scenarios"]
