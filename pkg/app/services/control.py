"""Nominal (unfiltered) controllers."""

import math

import numpy as np
import numpy.typing as npt

from app.core.exceptions import SingularAttitudeError
from app.models import (
    AttitudeCommand,
    AxisGains,
    GainSet,
    LyapunovDiagnostics,
    PointMassState,
    Setpoint,
    SystemParams,
    TetherForce,
    TuavState,
)

Vector = npt.NDArray[np.float64]

SINGULAR_ATTITUDE_TOL = 1e-6
DEFAULT_TILT_LIMIT = 0.5
LATERAL_DAMPING = 0.2


def backstep_accel(error: float, error_rate: float, gains: AxisGains) -> float:
    """
    Second derivative of the error demanded by the two-step backstepping design.

    With virtual control -k1*e and z1 = de + k1*e, choosing dz1 = -k2*z1 - e gives
    dde = -(1 + k1*k2)*e - (k1 + k2)*de.
    """
    return -gains.stiffness * error - gains.damping * error_rate


def thrust_for_vertical_accel(
    state: TuavState,
    accel_z: float,
    tether: TetherForce,
    params: SystemParams,
) -> float:
    """
    Invert the z row of the equations of motion for U_f.

    Raises:
        SingularAttitudeError: When |cos(theta)*cos(phi)| <= 1e-6
    """
    tilt = math.cos(state.theta) * math.cos(state.phi)
    if abs(tilt) <= SINGULAR_ATTITUDE_TOL:
        raise SingularAttitudeError("gimbal-singular thrust")

    m = params.m
    return (
        m * accel_z
        - m * state.q * state.u
        + m * state.p * state.v
        - m * params.g * tilt
        + tether.components[2]
        + params.Az * state.w
    ) / tilt


def altitude_accel_command(
    state: TuavState,
    z_des: float,
    gains: GainSet,
    w_des: float = 0.0,
    accel_des: float = 0.0,
) -> float:
    """Vertical acceleration that makes dz1 = -k2*z1 - x5 on x5 = z - z_des."""
    return accel_des + backstep_accel(state.z - z_des, state.w - w_des, gains.altitude)


def backstepping_altitude(
    state: TuavState,
    z_des: float,
    gains: GainSet,
    tether: TetherForce,
    params: SystemParams,
    w_des: float = 0.0,
    accel_des: float = 0.0,
) -> float:
    """
    Backstepping thrust law for altitude.

    Works on the error coordinate x5 = z - z_des with x6 = w - w_des. The result
    uses -m*k1*x6 where the closed-form law is sometimes printed with a bare
    -m*k1; only the former satisfies dz1 = -k2*z1 - x5.

    Args:
        state: Current TUAV state
        z_des: Desired altitude, m
        gains: Gain set (k1, k2 are the altitude pair)
        tether: Tension acting at this state
        params: Physical parameters
        w_des: Desired vertical velocity, m/s
        accel_des: Desired vertical acceleration (feedforward), m/s^2

    Returns:
        Thrust U_f in N

    Raises:
        SingularAttitudeError: Near cos(theta)*cos(phi) = 0
    """
    accel = altitude_accel_command(state, z_des, gains, w_des, accel_des)
    return thrust_for_vertical_accel(state, accel, tether, params)


def lyapunov_diagnostics(
    state: TuavState,
    z_des: float,
    gains: GainSet,
    w_des: float = 0.0,
) -> LyapunovDiagnostics:
    """V_c1 = x5^2/2 + z1^2/2 and its closed-loop derivative -k1*x5^2 - k2*z1^2."""
    x5 = state.z - z_des
    x6 = state.w - w_des
    z1 = x6 + gains.k1 * x5
    return LyapunovDiagnostics(
        value=0.5 * x5 * x5 + 0.5 * z1 * z1,
        derivative=-gains.k1 * x5 * x5 - gains.k2 * z1 * z1,
    )


def lateral_accel_command(state: TuavState, sp: Setpoint, gains: GainSet) -> tuple[float, float]:
    """Backstepping accelerations for the x and y channels, with reference feedforward."""
    ax = sp.acceleration[0] + backstep_accel(
        state.x - sp.position[0], state.u - sp.velocity[0], gains.x
    )
    ay = sp.acceleration[1] + backstep_accel(
        state.y - sp.position[1], state.v - sp.velocity[1], gains.y
    )
    return ax, ay


def position_accel_command(state: TuavState, sp: Setpoint, gains: GainSet) -> Vector:
    """Outer-loop acceleration for all three translational channels."""
    ax, ay = lateral_accel_command(state, sp, gains)
    az = altitude_accel_command(
        state, sp.position[2], gains, w_des=sp.velocity[2], accel_des=sp.acceleration[2]
    )
    return np.array([ax, ay, az])


def wrap_angle(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def attitude_and_lateral_nominal(
    state: TuavState,
    sp: Setpoint,
    gains: GainSet,
    params: SystemParams,
    thrust: float | None = None,
    lateral_accel: tuple[float, float] | None = None,
    tilt_limit: float = DEFAULT_TILT_LIMIT,
    tether: TetherForce | None = None,
) -> AttitudeCommand:
    """
    Attitude torques tracking a commanded tilt derived from the lateral errors.

    The x/y rows are inverted for (theta, phi) under the small-angle
    approximation. Rate coupling, tether and drag terms are removed first; the
    gravity projections stay in the 2x2 map, whose eigenvalues are (s_f - g) and
    -(s_f + g) for specific thrust s_f. The second one vanishes at hover thrust,
    so the map is solved by damped least squares (``LATERAL_DAMPING``) and roll
    authority fades out instead of blowing up. The tilt is saturated at
    ``tilt_limit``. Each attitude row then gets the same backstepping pattern as
    altitude, with the gyroscopic terms cancelled.

    Args:
        state: Current TUAV state
        sp: Reference sample (position, derivatives, yaw)
        gains: Gain set
        params: Physical parameters
        thrust: U_f that will be applied; hover thrust -m*g when omitted
        lateral_accel: Desired (ax, ay); the lateral backstepping law when omitted
        tilt_limit: Symmetric saturation for the commanded roll and pitch, rad
        tether: Tension acting on the airframe; slack when omitted
    """
    if lateral_accel is None:
        lateral_accel = lateral_accel_command(state, sp, gains)
    if thrust is None:
        thrust = -params.m * params.g
    if tether is None:
        tether = TetherForce()

    m, g = params.m, params.g
    t_x, t_y, _ = tether.components
    ax = lateral_accel[0] - (
        state.r * state.v - state.q * state.w - (t_x + params.Ax * state.u) / m
    )
    ay = lateral_accel[1] - (
        state.r * state.u - state.p * state.w + (t_y + params.Ay * state.v) / m
    )
    specific_thrust = thrust / m
    cpsi, spsi = math.cos(state.psi), math.sin(state.psi)

    tilt_map = specific_thrust * np.array([[cpsi, spsi], [spsi, -cpsi]]) - g * np.eye(2)
    normal = tilt_map.T @ tilt_map + LATERAL_DAMPING**2 * np.eye(2)
    theta_cmd, phi_cmd = np.linalg.solve(normal, tilt_map.T @ np.array([ax, ay]))

    saturated = abs(theta_cmd) > tilt_limit or abs(phi_cmd) > tilt_limit
    theta_cmd = float(np.clip(theta_cmd, -tilt_limit, tilt_limit))
    phi_cmd = float(np.clip(phi_cmd, -tilt_limit, tilt_limit))

    p, q, r = state.p, state.q, state.r
    roll_accel = backstep_accel(state.phi - phi_cmd, p, gains.phi)
    pitch_accel = backstep_accel(state.theta - theta_cmd, q, gains.theta)
    yaw_accel = backstep_accel(wrap_angle(state.psi - sp.yaw), r, gains.psi)

    return AttitudeCommand(
        torque_roll=params.Ixx * roll_accel + q * r * (params.Iyy - params.Izz),
        torque_pitch=params.Iyy * pitch_accel - p * r * (params.Ixx - params.Izz),
        torque_yaw=params.Izz * yaw_accel + p * q * (params.Ixx - params.Iyy),
        phi_cmd=phi_cmd,
        theta_cmd=theta_cmd,
        saturated=saturated,
    )


def winch_nominal(
    state: TuavState,
    l_des: float,
    gains: GainSet,
    params: SystemParams,
) -> float:
    """
    Winch torque driving the deployed length r_w*winch_angle to ``l_des``.

    The viscous term beta_w*winch_rate is compensated so the length error follows
    the backstepping pattern with the winch gain pair.

    Raises:
        ValueError: If l_des is outside (0, L_max]
    """
    if not 0.0 < l_des <= params.L_max:
        raise ValueError(f"l_des must be in (0, {params.L_max}], got {l_des}")

    error = params.r_w * state.winch_angle - l_des
    error_rate = params.r_w * state.winch_rate
    winch_accel = backstep_accel(error, error_rate, gains.winch) / params.r_w
    return (params.I_w * winch_accel + params.beta_w * state.winch_rate) / params.r_w


def point_mass_nominal(state: PointMassState, sp: Setpoint, gains: GainSet) -> Vector:
    """PD acceleration kp*(xi_des - xi) + kd*(v_des - v)."""
    return gains.kp * (np.asarray(sp.position) - state.position) + gains.kd * (
        np.asarray(sp.velocity) - state.velocity
    )


def velocity_nominal(position: npt.ArrayLike, sp: Setpoint, gains: GainSet) -> Vector:
    """Velocity command kp*(xi_des - xi) + v_des for the single integrator."""
    return gains.kp * (np.asarray(sp.position) - np.asarray(position, dtype=float)) + np.asarray(
        sp.velocity
    )
