"""Request and response schemas for the HTTP scenario runner."""

from typing import Any

from pydantic import BaseModel, Field

from app.models.report import InvariantReport
from app.models.scenario import ScenarioConfig
from app.models.trajectory import TrajectoryRecord, TrajectorySummary


class ScenarioRunRequest(BaseModel):
    """Scenario to run: a full config, dotted-key overrides on top, or both."""

    config: ScenarioConfig | None = Field(
        default=None, description="Complete scenario; defaults when omitted"
    )
    overrides: dict[str, Any] = Field(
        default_factory=dict,
        description="Dotted configuration keys, e.g. {'cbf.gamma': 2.0}",
    )
    include_records: bool = Field(default=False, description="Return every logged step")


class ScenarioRunResponse(BaseModel):
    """Outcome of one episode."""

    scenario: str
    config: ScenarioConfig
    summary: TrajectorySummary
    report: InvariantReport
    safety_passed: bool
    records: list[TrajectoryRecord] | None = None
