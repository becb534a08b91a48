"""API v1 router aggregator."""

from fastapi import APIRouter

from app.api.v1.endpoints import scenarios

# Create the main API v1 router
api_router = APIRouter()

api_router.include_router(scenarios.router, prefix="/scenarios", tags=["scenarios"])
