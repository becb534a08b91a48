"""Tether-length barrier, Lie derivatives and half-space constraint assembly."""

import logging
import math

import numpy as np
import numpy.typing as npt

from app.models import CbfSpec, HalfspaceConstraint, PointMassState

logger = logging.getLogger(__name__)

Vector = npt.NDArray[np.float64]


def barrier_value(xi: npt.ArrayLike, spec: CbfSpec) -> float:
    """h = L_max - ||xi||; nonnegative exactly on the safe set."""
    return spec.l_max - float(np.linalg.norm(np.asarray(xi, dtype=float)))


def barrier_gradient(xi: npt.ArrayLike, spec: CbfSpec) -> Vector:
    """-xi/||xi||, or zero inside the guard radius where the gradient is undefined."""
    xi = np.asarray(xi, dtype=float)
    norm = float(np.linalg.norm(xi))
    if norm < spec.epsilon_origin:
        return np.zeros(3)
    return -xi / norm


def class_kappa(h: float, spec: CbfSpec) -> float:
    """Extended linear class-K function alpha(h) = gamma*h, defined for h < 0 too."""
    return spec.gamma * h


def lie_derivatives(
    xi: npt.ArrayLike,
    spec: CbfSpec,
    f_pos: npt.ArrayLike,
    g_pos: npt.ArrayLike,
) -> tuple[float, Vector]:
    """
    L_f h and L_g h of the barrier for position dynamics xi' = f_pos + g_pos u.

    Returns:
        (L_f h, L_g h) with L_g h a row over the input channels
    """
    grad = barrier_gradient(xi, spec)
    g_pos = np.atleast_2d(np.asarray(g_pos, dtype=float))
    return float(grad @ np.asarray(f_pos, dtype=float)), grad @ g_pos


def cbf_condition_margin(
    xi: npt.ArrayLike,
    u: npt.ArrayLike,
    spec: CbfSpec,
    f_pos: npt.ArrayLike,
    g_pos: npt.ArrayLike,
) -> float:
    """L_f h + L_g h u + alpha(h); nonnegative when the barrier condition holds."""
    lf, lg = lie_derivatives(xi, spec, f_pos, g_pos)
    return lf + float(lg @ np.asarray(u, dtype=float)) + class_kappa(barrier_value(xi, spec), spec)


def _vacuous(dim: int) -> HalfspaceConstraint:
    return HalfspaceConstraint(normal=(0.0,) * dim, offset=0.0)


def _active(normal: Vector, offset: float, u_nom: npt.ArrayLike | None) -> bool:
    if u_nom is None:
        return False
    return float(normal @ np.asarray(u_nom, dtype=float)) > offset


def cbf_halfspace_first_order(
    xi: npt.ArrayLike,
    spec: CbfSpec,
    f_pos: npt.ArrayLike,
    g_pos: npt.ArrayLike,
    u_nom: npt.ArrayLike | None = None,
) -> HalfspaceConstraint:
    """
    Rearranged barrier condition xi^T g_pos u <= ||xi||*alpha(h) + xi^T f_pos.

    The offset carries +xi^T f_pos exactly as the rearranged inequality is
    written; the models this mode is used with have f_pos = 0.

    Args:
        xi: Position, m
        spec: Barrier settings
        f_pos: Drift of the position rows
        g_pos: 3 x m input map of the position rows
        u_nom: Nominal input, only used to fill ``active_hint``
    """
    xi = np.asarray(xi, dtype=float)
    g_pos = np.atleast_2d(np.asarray(g_pos, dtype=float))
    norm = float(np.linalg.norm(xi))
    if norm < spec.epsilon_origin:
        return _vacuous(g_pos.shape[1])

    normal = g_pos.T @ xi
    offset = norm * class_kappa(spec.l_max - norm, spec) + float(
        xi @ np.asarray(f_pos, dtype=float)
    )
    return HalfspaceConstraint(
        normal=tuple(normal.tolist()),
        offset=offset,
        active_hint=_active(normal, offset, u_nom),
    )


def hocbf_terms(state: PointMassState, spec: CbfSpec) -> tuple[float, float, float]:
    """(h, dh, psi1) with dh = -xi^T v/||xi|| and psi1 = dh + lambda*h."""
    xi = state.position
    norm = float(np.linalg.norm(xi))
    h = spec.l_max - norm
    h_dot = 0.0 if norm < spec.epsilon_origin else -float(xi @ state.velocity) / norm
    return h, h_dot, h_dot + spec.lambda_ * h


def cbf_halfspace_exponential(
    state: PointMassState,
    spec: CbfSpec,
    u_nom: npt.ArrayLike | None = None,
) -> HalfspaceConstraint:
    """
    Second-order constraint for acceleration inputs: d(psi1)/dt >= -gamma*psi1.

    a = xi/||xi||,
    b = -||v||^2/||xi|| + (xi^T v)^2/||xi||^3 + (gamma + lambda)*dh + gamma*lambda*h.

    The constraint is returned even when psi1 < 0; it then pulls psi1 back up.
    """
    xi = state.position
    v = state.velocity
    norm = float(np.linalg.norm(xi))
    if norm < spec.epsilon_origin:
        return _vacuous(3)

    h, h_dot, psi1 = hocbf_terms(state, spec)
    if psi1 < 0.0:
        logger.debug("HOCBF recovery mode: psi1=%.6g h=%.6g", psi1, h)

    radial_v = float(xi @ v)
    normal = xi / norm
    offset = (
        -float(v @ v) / norm
        + radial_v * radial_v / norm**3
        + (spec.gamma + spec.lambda_) * h_dot
        + spec.gamma * spec.lambda_ * h
    )
    return HalfspaceConstraint(
        normal=tuple(normal.tolist()),
        offset=offset,
        active_hint=_active(normal, offset, u_nom),
    )


def comparison_bound(h0: float, spec: CbfSpec, t: float) -> float:
    """
    Solution of y' = -alpha(y), y(0) = h0, i.e. h0*exp(-gamma*t); h(t) never drops below it.

    Raises:
        ValueError: If h0 < 0 or t < 0
    """
    if h0 < 0.0:
        raise ValueError(f"h0 must be >= 0, got {h0}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return h0 * math.exp(-spec.gamma * t)


def sampled_data_gamma(gamma: float, dt: float) -> float:
    """Slope whose zero-order-held Euler decay (1 - gamma_d*dt) equals exp(-gamma*dt)."""
    return -math.expm1(-gamma * dt) / dt
