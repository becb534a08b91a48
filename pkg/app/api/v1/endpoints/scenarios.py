"""API endpoints for running scenarios."""

from fastapi import APIRouter

from app.api.dependencies import DefaultConfigDep, resolve_config
from app.models import ScenarioConfig, ScenarioRunRequest, ScenarioRunResponse
from app.services.simulation import run_scenario, verify_log

router = APIRouter()


@router.get(
    "/defaults",
    response_model=ScenarioConfig,
    summary="Get the default scenario",
    description="Default configuration with the built-in physical parameters and gains",
)
def get_defaults(default: DefaultConfigDep) -> ScenarioConfig:
    return default


@router.post(
    "/run",
    response_model=ScenarioRunResponse,
    summary="Run a scenario",
    description=(
        "Run one closed-loop episode and return its summary and invariant report. "
        "Per-step records are included only when requested."
    ),
)
def run(request: ScenarioRunRequest, default: DefaultConfigDep) -> ScenarioRunResponse:
    """Run one episode synchronously."""
    config = resolve_config(request, default)
    log = run_scenario(config)
    report = verify_log(log, config)
    return ScenarioRunResponse(
        scenario=log.scenario,
        config=config,
        summary=log.summarize(),
        report=report,
        safety_passed=report.safety_passed,
        records=log.records if request.include_records else None,
    )
