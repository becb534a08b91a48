"""Episode state, per-step records and trajectory logs."""

import math

from pydantic import BaseModel, ConfigDict, Field

from app.models.enums import QpStatus
from app.models.scenario import ScenarioConfig

Vector = tuple[float, ...]


class SimState(BaseModel):
    """Integrator state between two ticks."""

    model_config = ConfigDict(frozen=True)

    t: float = 0.0
    step: int = 0
    state: Vector


class TrajectoryRecord(BaseModel):
    """Everything logged at one tick."""

    model_config = ConfigDict(frozen=True)

    t: float
    state: Vector
    position: tuple[float, float, float]
    reference: tuple[float, float, float]
    u_nom: Vector
    u_star: Vector
    h: float
    psi1: float | None = None
    r: float
    constraint_active: bool = False
    qp_status: QpStatus = QpStatus.SKIPPED
    fallback_applied: bool = False

    @property
    def tracking_error(self) -> float:
        return math.dist(self.position, self.reference)

    @property
    def intervened(self) -> bool:
        return self.u_star != self.u_nom


class TrajectorySummary(BaseModel):
    """Aggregates over a whole log."""

    min_h: float
    max_r: float
    final_error: float
    intervention_steps: int = 0
    infeasible_steps: int = 0
    record_count: int = 0


class TrajectoryLog(BaseModel):
    """Time-indexed record of one episode."""

    scenario: str
    config: ScenarioConfig | None = None
    l_max: float
    records: list[TrajectoryRecord] = Field(default_factory=list)

    def summarize(self) -> TrajectorySummary:
        if not self.records:
            return TrajectorySummary(min_h=math.nan, max_r=math.nan, final_error=math.nan)
        return TrajectorySummary(
            min_h=min(rec.h for rec in self.records),
            max_r=max(rec.r for rec in self.records),
            final_error=self.records[-1].tracking_error,
            intervention_steps=sum(1 for rec in self.records if rec.intervened),
            infeasible_steps=sum(
                1 for rec in self.records if rec.qp_status is QpStatus.INFEASIBLE
            ),
            record_count=len(self.records),
        )

    @property
    def summary(self) -> TrajectorySummary:
        return self.summarize()


class TrajectoryDocument(BaseModel):
    """JSON emission of a log: records plus the summary block."""

    scenario: str
    l_max: float
    summary: TrajectorySummary
    config: ScenarioConfig | None = None
    records: list[TrajectoryRecord] = Field(default_factory=list)

    @classmethod
    def from_log(cls, log: TrajectoryLog) -> "TrajectoryDocument":
        return cls(
            scenario=log.scenario,
            l_max=log.l_max,
            summary=log.summarize(),
            config=log.config,
            records=log.records,
        )
