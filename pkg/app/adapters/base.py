"""Plant adapter interface used by the closed-loop simulator."""

from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt

from app.core.exceptions import NonFiniteStateError
from app.models import HalfspaceConstraint, ModelKind, ScenarioConfig
from app.services.dynamics import DerivativeFn
from app.services.reference import ReferenceTrajectory, build_reference

Vector = npt.NDArray[np.float64]


class BasePlantAdapter(ABC):
    """
    One plant model wired to its nominal law and barrier constraint.

    The safety filter works in the adapter's *filter space* (velocity for the
    single integrator, acceleration otherwise); ``actuate`` maps a filter-space
    command to the plant input that is integrated and logged.
    """

    kind: ModelKind
    input_dim: int = 3

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.reference: ReferenceTrajectory = build_reference(config)

    @abstractmethod
    def initial_state(self) -> Vector:
        """Plant state at t = 0."""

    @abstractmethod
    def position(self, x: Vector) -> Vector:
        """Inertial position xi of a plant state."""

    @property
    @abstractmethod
    def rhs(self) -> DerivativeFn:
        """Right-hand side f(x, u) for the integrator."""

    @abstractmethod
    def nominal(self, x: Vector, t: float) -> Vector:
        """Unfiltered command in filter space."""

    @abstractmethod
    def constraint(
        self, x: Vector, command: Vector
    ) -> tuple[HalfspaceConstraint, float | None]:
        """Barrier half-space in filter space and the HOCBF psi1 when defined."""

    def actuate(self, x: Vector, t: float, command: Vector) -> Vector:
        """Plant input realising a filter-space command."""
        return np.asarray(command, dtype=float)

    def validate_state(self, x: Vector, t: float) -> None:
        """Raise a SimulationFault if the state left the valid region."""
        if not np.all(np.isfinite(x)):
            raise NonFiniteStateError("plant state", t)
