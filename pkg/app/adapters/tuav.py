"""Full tethered-UAV plant with the cascaded backstepping stack."""

import logging

import numpy as np

from app.adapters.base import BasePlantAdapter, Vector
from app.core.exceptions import SingularAttitudeError
from app.models import HalfspaceConstraint, ModelKind, PointMassState, TuavState
from app.services.control import (
    attitude_and_lateral_nominal,
    position_accel_command,
    thrust_for_vertical_accel,
    winch_nominal,
)
from app.services.dynamics import DerivativeFn, tether_force, tuav_rhs
from app.services.safety import cbf_halfspace_exponential, hocbf_terms

logger = logging.getLogger(__name__)


class FullTuavAdapter(BasePlantAdapter):
    """
    Rigid body plus winch, driven by outer per-axis backstepping accelerations.

    The filter acts on the commanded translational acceleration (point-mass
    abstraction of the outer loop); thrust, attitude torques and winch torque are
    then derived from the filtered acceleration.
    """

    kind = ModelKind.FULL_TUAV
    input_dim = 5

    def __init__(self, config):
        super().__init__(config)
        self._rhs = tuav_rhs(config.params)
        self.tilt_saturations = 0

    def initial_state(self) -> Vector:
        cfg = self.config
        state = TuavState(
            x=cfg.start[0],
            y=cfg.start[1],
            z=cfg.start[2],
            u=cfg.initial_velocity[0],
            v=cfg.initial_velocity[1],
            w=cfg.initial_velocity[2],
            winch_angle=cfg.desired_tether_length / cfg.params.r_w,
        )
        return state.as_array()

    def position(self, x: Vector) -> Vector:
        return x[:3]

    @property
    def rhs(self) -> DerivativeFn:
        return self._rhs

    def nominal(self, x: Vector, t: float) -> Vector:
        state = TuavState.from_array(x)
        return position_accel_command(state, self.reference.at(t), self.config.gains)

    def constraint(self, x: Vector, command: Vector) -> tuple[HalfspaceConstraint, float | None]:
        point = PointMassState.from_vectors(x[:3], x[6:9])
        _, _, psi1 = hocbf_terms(point, self.config.cbf)
        return cbf_halfspace_exponential(point, self.config.cbf, u_nom=command), psi1

    def actuate(self, x: Vector, t: float, command: Vector) -> Vector:
        cfg = self.config
        state = TuavState.from_array(x)
        sp = self.reference.at(t)
        tether = tether_force(state, cfg.params)
        thrust = thrust_for_vertical_accel(state, float(command[2]), tether, cfg.params)
        attitude = attitude_and_lateral_nominal(
            state,
            sp,
            cfg.gains,
            cfg.params,
            thrust=thrust,
            lateral_accel=(float(command[0]), float(command[1])),
            tether=tether,
        )
        if attitude.saturated:
            if self.tilt_saturations == 0:
                logger.warning("Commanded tilt saturated at t=%.3f s", t)
            self.tilt_saturations += 1
        winch = winch_nominal(state, sp.tether_length, cfg.gains, cfg.params)
        return np.array([thrust, *attitude.torques, winch])

    def validate_state(self, x: Vector, t: float) -> None:
        super().validate_state(x, t)
        state = TuavState.from_array(x)
        if not state.attitude_valid:
            raise SingularAttitudeError(
                f"attitude left (-pi/2, pi/2): phi={state.phi:.4g}, theta={state.theta:.4g}", t
            )
