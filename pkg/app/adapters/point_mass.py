"""Single- and double-integrator plants for the point-mass scenarios."""

import numpy as np

from app.adapters.base import BasePlantAdapter, Vector
from app.models import CbfMode, HalfspaceConstraint, ModelKind, PointMassState
from app.services.control import point_mass_nominal, velocity_nominal
from app.services.dynamics import DerivativeFn, double_integrator_rhs, single_integrator_rhs
from app.services.safety import (
    cbf_halfspace_exponential,
    cbf_halfspace_first_order,
    hocbf_terms,
    sampled_data_gamma,
)

_IDENTITY = np.eye(3)
_NO_DRIFT = np.zeros(3)


class SingleIntegratorAdapter(BasePlantAdapter):
    """Velocity-commanded point: xi' = u, filtered with the first-order condition."""

    kind = ModelKind.SINGLE_INTEGRATOR

    def __init__(self, config):
        super().__init__(config)
        spec = config.cbf
        if config.sampled_data and spec.mode is CbfMode.FIRST_ORDER:
            spec = spec.model_copy(update={"gamma": sampled_data_gamma(spec.gamma, config.dt)})
        self.filter_spec = spec

    def initial_state(self) -> Vector:
        return np.asarray(self.config.start, dtype=float)

    def position(self, x: Vector) -> Vector:
        return x

    @property
    def rhs(self) -> DerivativeFn:
        return single_integrator_rhs

    def nominal(self, x: Vector, t: float) -> Vector:
        return velocity_nominal(x, self.reference.at(t), self.config.gains)

    def constraint(self, x: Vector, command: Vector) -> tuple[HalfspaceConstraint, float | None]:
        return (
            cbf_halfspace_first_order(x, self.filter_spec, _NO_DRIFT, _IDENTITY, u_nom=command),
            None,
        )


class DoubleIntegratorAdapter(BasePlantAdapter):
    """Acceleration-commanded point, filtered with the exponential second-order condition."""

    kind = ModelKind.DOUBLE_INTEGRATOR

    def initial_state(self) -> Vector:
        return np.concatenate(
            [
                np.asarray(self.config.start, dtype=float),
                np.asarray(self.config.initial_velocity, dtype=float),
            ]
        )

    def position(self, x: Vector) -> Vector:
        return x[:3]

    @property
    def rhs(self) -> DerivativeFn:
        return double_integrator_rhs

    def nominal(self, x: Vector, t: float) -> Vector:
        state = PointMassState.from_array(x)
        return point_mass_nominal(state, self.reference.at(t), self.config.gains)

    def constraint(self, x: Vector, command: Vector) -> tuple[HalfspaceConstraint, float | None]:
        state = PointMassState.from_array(x)
        _, _, psi1 = hocbf_terms(state, self.config.cbf)
        return cbf_halfspace_exponential(state, self.config.cbf, u_nom=command), psi1
