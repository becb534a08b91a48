"""Enum definitions for models, scenarios, solver and filter states."""

import enum


class ModelKind(str, enum.Enum):
    """Plant model used by a scenario."""

    SINGLE_INTEGRATOR = "single_integrator"
    DOUBLE_INTEGRATOR = "double_integrator"
    FULL_TUAV = "full_tuav"


class ScenarioKind(str, enum.Enum):
    """Reference shape of a scenario."""

    SETPOINT = "setpoint"
    LINEAR_TRACK = "linear_track"
    CIRCULAR_TRACK = "circular_track"


class CbfMode(str, enum.Enum):
    """Barrier constraint flavour."""

    FIRST_ORDER = "first_order"
    EXPONENTIAL_SECOND_ORDER = "exponential_second_order"


class QpStatus(str, enum.Enum):
    """Outcome of a safety-filter solve."""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    MAX_ITER = "max_iter"
    SKIPPED = "skipped"


class InfeasiblePolicy(str, enum.Enum):
    """What the simulator applies when the QP has no solution."""

    HOLD_ZERO = "hold_zero"
    CLIP_NOMINAL = "clip_nominal"


class EmitFormat(str, enum.Enum):
    """Trajectory output formats."""

    CSV = "csv"
    JSON = "json"
    BOTH = "both"

    def expand(self) -> list["EmitFormat"]:
        """Concrete formats this choice stands for."""
        if self is EmitFormat.BOTH:
            return [EmitFormat.CSV, EmitFormat.JSON]
        return [self]
