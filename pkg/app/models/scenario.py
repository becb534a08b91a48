"""Setpoint, scenario configuration and run manifest models."""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.enums import CbfMode, EmitFormat, InfeasiblePolicy, ModelKind, ScenarioKind
from app.models.params import CbfSpec, GainSet, SystemParams

Vec3 = tuple[float, float, float]

DEFAULT_CBF_MODE: dict[ModelKind, CbfMode] = {
    ModelKind.SINGLE_INTEGRATOR: CbfMode.FIRST_ORDER,
    ModelKind.DOUBLE_INTEGRATOR: CbfMode.EXPONENTIAL_SECOND_ORDER,
    ModelKind.FULL_TUAV: CbfMode.EXPONENTIAL_SECOND_ORDER,
}


class Setpoint(BaseModel):
    """Reference sample: desired position, its derivatives, yaw and tether length."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    position: Vec3 = (0.0, 0.0, 0.0)
    velocity: Vec3 = (0.0, 0.0, 0.0)
    acceleration: Vec3 = (0.0, 0.0, 0.0)
    yaw: float = 0.0
    tether_length: float = Field(default=13.0, gt=0)


class ScenarioConfig(BaseModel):
    """Everything a closed-loop episode needs."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    name: str = "scenario"
    model: ModelKind = ModelKind.DOUBLE_INTEGRATOR
    scenario: ScenarioKind = ScenarioKind.SETPOINT
    target: Vec3 = (2.0, 2.0, 5.0)
    start: Vec3 = (0.0, 0.0, 0.0)
    initial_velocity: Vec3 = (0.0, 0.0, 0.0)
    center: Vec3 = (0.0, 0.0, 6.0)
    radius: float = Field(default=15.0, gt=0)
    omega: float = Field(default=0.2, description="Circle angular rate, rad/s")
    speed: float = Field(default=0.5, gt=0, description="Linear-track ramp speed, m/s")
    yaw: float = 0.0
    tether_length: float | None = Field(
        default=None, gt=0, description="Desired deployed tether length; None means L_max"
    )
    duration: float = Field(default=60.0, gt=0)
    dt: float = Field(default=0.01, gt=0, le=0.1)
    gains: GainSet = Field(default_factory=GainSet)
    cbf: CbfSpec = Field(default_factory=CbfSpec)
    params: SystemParams = Field(default_factory=SystemParams)
    filter_enabled: bool = True
    infeasible_policy: InfeasiblePolicy = InfeasiblePolicy.HOLD_ZERO
    input_bound: float | None = Field(default=None, gt=0)
    sampled_data: bool = True
    lyapunov_check: bool = False

    @model_validator(mode="before")
    @classmethod
    def _resolve_cbf_mode(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        try:
            model = ModelKind(data.get("model", ModelKind.DOUBLE_INTEGRATOR))
        except ValueError:
            # reported by the field validator with the right location
            return data
        cbf = data.get("cbf")
        if cbf is None:
            cbf = CbfSpec()
        if isinstance(cbf, CbfSpec):
            if cbf.mode is None:
                cbf = cbf.model_copy(update={"mode": DEFAULT_CBF_MODE[model]})
        elif isinstance(cbf, dict) and cbf.get("mode") is None:
            cbf = {**cbf, "mode": DEFAULT_CBF_MODE[model]}
        return {**data, "cbf": cbf}

    @model_validator(mode="after")
    def _check_consistency(self) -> "ScenarioConfig":
        if self.cbf.l_max != self.params.L_max:
            raise ValueError("cbf.l_max and params.L_max must agree")
        if self.cbf.mode != DEFAULT_CBF_MODE[self.model]:
            raise ValueError(
                f"cbf.mode {self.cbf.mode.value} is not usable with model {self.model.value}"
            )
        if self.tether_length is not None and self.tether_length > self.params.L_max:
            raise ValueError("tether_length must be <= L_max")
        return self

    @property
    def cbf_mode(self) -> CbfMode:
        assert self.cbf.mode is not None
        return self.cbf.mode

    @property
    def steps(self) -> int:
        """Number of integration steps; the log holds steps + 1 records."""
        return int(round(self.duration / self.dt))

    @property
    def desired_tether_length(self) -> float:
        return self.tether_length if self.tether_length is not None else self.params.L_max


class RunManifest(BaseModel):
    """Where and how a CLI run emits its results."""

    model_config = ConfigDict(frozen=True)

    config_path: str | None = None
    output_dir: str = "runs"
    formats: list[EmitFormat] = Field(default_factory=lambda: [EmitFormat.CSV], min_length=1)
    verbosity: int = Field(default=1, ge=0, le=2)
    batch: list[str] = Field(default_factory=list)
    base_config: str | None = None
    overrides: dict[str, Any] = Field(default_factory=dict)
    force_no_filter: bool = False

    @property
    def concrete_formats(self) -> list[EmitFormat]:
        out: list[EmitFormat] = []
        for fmt in self.formats:
            for concrete in fmt.expand():
                if concrete not in out:
                    out.append(concrete)
        return out


class SuiteEntry(BaseModel):
    """One scenario of a suite and whether its safety check gates the exit status."""

    model_config = ConfigDict(frozen=True)

    name: str
    config: ScenarioConfig
    safety_critical: bool = True
