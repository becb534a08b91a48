"""Domain models for the TUAV safety simulator."""

from app.models.control import AttitudeCommand, LyapunovDiagnostics
from app.models.enums import (
    CbfMode,
    EmitFormat,
    InfeasiblePolicy,
    ModelKind,
    QpStatus,
    ScenarioKind,
)
from app.models.params import AxisGains, CbfSpec, GainSet, SystemParams
from app.models.qp import HalfspaceConstraint, QpProblem, QpSolution
from app.models.report import (
    SAFETY_CHECK,
    CheckResult,
    InvariantReport,
    SuiteEntryResult,
    SuiteReport,
)
from app.models.run import ScenarioRunRequest, ScenarioRunResponse
from app.models.scenario import (
    DEFAULT_CBF_MODE,
    RunManifest,
    ScenarioConfig,
    Setpoint,
    SuiteEntry,
)
from app.models.state import ControlInput, PointMassState, TetherForce, TuavState
from app.models.trajectory import (
    SimState,
    TrajectoryDocument,
    TrajectoryLog,
    TrajectoryRecord,
    TrajectorySummary,
)

__all__ = [
    # Enums
    "CbfMode",
    "EmitFormat",
    "InfeasiblePolicy",
    "ModelKind",
    "QpStatus",
    "ScenarioKind",
    # State
    "TuavState",
    "ControlInput",
    "TetherForce",
    "PointMassState",
    # Parameters
    "SystemParams",
    "AxisGains",
    "GainSet",
    "CbfSpec",
    # Scenario
    "Setpoint",
    "ScenarioConfig",
    "RunManifest",
    "SuiteEntry",
    "DEFAULT_CBF_MODE",
    # Control
    "AttitudeCommand",
    "LyapunovDiagnostics",
    # QP
    "HalfspaceConstraint",
    "QpProblem",
    "QpSolution",
    # Trajectory
    "SimState",
    "TrajectoryRecord",
    "TrajectorySummary",
    "TrajectoryLog",
    "TrajectoryDocument",
    # Reports
    "SAFETY_CHECK",
    "CheckResult",
    "InvariantReport",
    "SuiteEntryResult",
    "SuiteReport",
    # HTTP
    "ScenarioRunRequest",
    "ScenarioRunResponse",
]
