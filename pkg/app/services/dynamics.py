"""Equations of motion, tether tension and the fixed-step integrator."""

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt

from app.core.exceptions import NonFiniteStateError
from app.models import ControlInput, PointMassState, SystemParams, TetherForce, TuavState

Vector = npt.NDArray[np.float64]
DerivativeFn = Callable[[Vector, Vector], Vector]

_TUAV_ROWS = tuple(f"d{name}" for name in TuavState.FIELDS)


def deployed_length(winch_angle: float, params: SystemParams) -> float:
    """Tether paid out by the winch, L_d = r_w * winch_angle."""
    return params.r_w * winch_angle


def tether_force(state: TuavState, params: SystemParams) -> TetherForce:
    """
    One-sided linear spring along the straight line to the anchor at the origin.

    T1 = K_t * max(0, ||xi|| - L_d). The elevation and azimuth are those of the
    UAV as seen from the anchor, so (T_X, T_Y, T_Z) = T1 * xi / ||xi||; the minus
    sign on T1*sin(alpha) in the z row turns this into a pull toward the anchor.

    Raises:
        ValueError: If the winch angle is negative
    """
    if state.winch_angle < 0.0:
        raise ValueError(f"winch_angle must be >= 0, got {state.winch_angle}")

    x, y, z = state.x, state.y, state.z
    distance = math.sqrt(x * x + y * y + z * z)
    stretch = distance - deployed_length(state.winch_angle, params)
    if stretch <= 0.0 or distance == 0.0 or params.K_t == 0.0:
        return TetherForce()

    magnitude = params.K_t * stretch
    elevation = math.atan2(z, math.hypot(x, y))
    azimuth = math.atan2(x, y)
    cos_el = math.cos(elevation)
    return TetherForce(
        magnitude=magnitude,
        elevation=elevation,
        azimuth=azimuth,
        components=(
            magnitude * cos_el * math.sin(azimuth),
            magnitude * cos_el * math.cos(azimuth),
            magnitude * math.sin(elevation),
        ),
    )


def tuav_derivative(
    state: TuavState,
    control: ControlInput,
    tether: TetherForce,
    params: SystemParams,
) -> Vector:
    """
    Time derivative of the 14 TUAV states, rows in ``TuavState.FIELDS`` order.

    The translational rows are evaluated exactly as printed, including the
    body-rate coupling terms and the mixed gravity projections: -m*g*sin(theta)
    in x, -m*g*cos(theta)*sin(phi) in y and +m*g*cos(theta)*cos(phi) in z. The
    tether enters as -T_X in x, +T_Y in y and -T_Z in z, and the drag as -Ax*u,
    +Ay*v and -Az*w; the y-row signs follow the printed equations.

    Raises:
        NonFiniteStateError: Naming the first non-finite row
    """
    m = params.m
    u_f = control.thrust
    cphi, sphi = math.cos(state.phi), math.sin(state.phi)
    cth, sth = math.cos(state.theta), math.sin(state.theta)
    cpsi, spsi = math.cos(state.psi), math.sin(state.psi)
    u, v, w = state.u, state.v, state.w
    p, q, r = state.p, state.q, state.r

    t_x, t_y, t_z = tether.components

    x_dd = (
        u_f * (cpsi * cphi * sth + spsi * sphi)
        + m * r * v
        - m * q * w
        - (m * params.g * sth + t_x + params.Ax * u)
    ) / m
    y_dd = (
        u_f * (cphi * spsi * sth - cpsi * sphi)
        + m * r * u
        - m * p * w
        - (m * params.g * cth * sphi - t_y - params.Ay * v)
    ) / m
    z_dd = (
        u_f * cth * cphi
        + m * q * u
        - m * p * v
        + m * params.g * cth * cphi
        - t_z
        - params.Az * w
    ) / m
    phi_dd = (control.torque_roll - q * r * (params.Iyy - params.Izz)) / params.Ixx
    theta_dd = (control.torque_pitch + p * r * (params.Ixx - params.Izz)) / params.Iyy
    psi_dd = (control.torque_yaw - p * q * (params.Ixx - params.Iyy)) / params.Izz
    winch_dd = (-params.beta_w * state.winch_rate + params.r_w * control.winch_torque) / params.I_w

    deriv = np.array(
        [u, v, w, p, q, r, x_dd, y_dd, z_dd, phi_dd, theta_dd, psi_dd, state.winch_rate, winch_dd]
    )
    if not np.all(np.isfinite(deriv)):
        row = _TUAV_ROWS[int(np.argmin(np.isfinite(deriv)))]
        raise NonFiniteStateError(f"tuav_derivative row {row}")
    return deriv


def tuav_rhs(params: SystemParams) -> DerivativeFn:
    """Array-level right-hand side for the integrator; tension re-evaluated per stage."""

    def rhs(x: Vector, u: Vector) -> Vector:
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u))):
            raise NonFiniteStateError("tuav_rhs arguments")
        state = TuavState.from_array(x)
        control = ControlInput.from_array(u)
        return tuav_derivative(state, control, tether_force(state, params), params)

    return rhs


def point_mass_derivative(state: PointMassState, accel: npt.ArrayLike) -> Vector:
    """Double integrator: position rate is velocity, velocity rate is the input."""
    return np.concatenate([state.velocity, np.asarray(accel, dtype=float)])


def double_integrator_rhs(x: Vector, u: Vector) -> Vector:
    return point_mass_derivative(PointMassState.from_array(x), u)


def single_integrator_rhs(x: Vector, u: Vector) -> Vector:
    """Velocity-commanded point: position rate equals the input."""
    return np.asarray(u, dtype=float).copy()


def rk4_step(deriv_fn: DerivativeFn, state: npt.ArrayLike, control: npt.ArrayLike, dt: float) -> Vector:
    """
    Classical fourth-order Runge-Kutta step with the input held over the step.

    Raises:
        ValueError: If dt is not positive
        NonFiniteStateError: Naming the first non-finite stage
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")

    x = np.asarray(state, dtype=float)
    u = np.asarray(control, dtype=float)

    k1 = _finite_stage(deriv_fn(x, u), "k1")
    k2 = _finite_stage(deriv_fn(x + 0.5 * dt * k1, u), "k2")
    k3 = _finite_stage(deriv_fn(x + 0.5 * dt * k2, u), "k3")
    k4 = _finite_stage(deriv_fn(x + dt * k3, u), "k4")
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _finite_stage(k: Vector, stage: str) -> Vector:
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise NonFiniteStateError(f"rk4 stage {stage}")
    return k
