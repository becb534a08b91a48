"""Safety-filter quadratic program: min 1/2 ||u - u_nom||^2 s.t. A u <= b."""

import logging

import numpy as np
import numpy.typing as npt

from app.core.exceptions import QpInfeasibleError
from app.models import HalfspaceConstraint, QpProblem, QpSolution, QpStatus

logger = logging.getLogger(__name__)

Vector = npt.NDArray[np.float64]

PRIMAL_TOL = 1e-9
KKT_TOL = 1e-8
ZERO_DIRECTION_TOL = 1e-12
ITERATIONS_PER_DIMENSION = 50


def project_halfspace(u_nom: npt.ArrayLike, c: HalfspaceConstraint) -> Vector:
    """
    Euclidean projection of ``u_nom`` onto {u : a^T u <= b}.

    Raises:
        QpInfeasibleError: For a zero normal with a negative offset
    """
    u = np.asarray(u_nom, dtype=float)
    a = np.asarray(c.normal, dtype=float)
    norm_sq = float(a @ a)
    if norm_sq == 0.0:
        if c.offset < 0.0:
            raise QpInfeasibleError(f"empty half-space: 0 <= {c.offset}")
        return u.copy()

    excess = float(a @ u) - c.offset
    if excess <= 0.0:
        return u.copy()
    return u - (excess / norm_sq) * a


def kkt_residual(p: QpProblem, u: npt.ArrayLike, multipliers: npt.ArrayLike) -> float:
    """
    Largest KKT violation of (u, mu) over all stacked inequality rows.

    Max of stationarity ||(u - u_nom) + A^T mu||_inf, primal infeasibility,
    negative multipliers and complementary slackness |mu_j (a_j^T u - b_j)|.

    Raises:
        ValueError: If the multiplier count does not match the stacked rows
    """
    A, b = p.stacked()
    u = np.asarray(u, dtype=float)
    mu = np.asarray(multipliers, dtype=float).ravel()
    if mu.shape[0] != A.shape[0]:
        raise ValueError(f"expected {A.shape[0]} multipliers, got {mu.shape[0]}")

    u_nom = np.asarray(p.u_nom, dtype=float)
    stationarity = float(np.max(np.abs((u - u_nom) + A.T @ mu)))
    if A.shape[0] == 0:
        return stationarity

    slack = A @ u - b
    primal = max(0.0, float(np.max(slack)))
    dual = max(0.0, float(np.max(-mu)))
    complementarity = float(np.max(np.abs(mu * slack)))
    return max(stationarity, primal, dual, complementarity)


def solve_active_set(p: QpProblem) -> QpSolution:
    """
    Dual active-set solve of the identity-Hessian QP.

    Starts from the unconstrained optimum u_nom and adds the most violated row
    each outer pass, dropping rows whose multipliers would turn negative
    (ties drop the most recently added row). Rows ``0..k-1`` are the half-space
    constraints, bound rows follow (see ``QpProblem.stacked``).

    Returns:
        QpSolution with status optimal (certified by ``kkt_residual``), infeasible
        (with a nonnegative witness y over the rows, sum y_j a_j ~ 0 and
        sum y_j b_j < 0) or max_iter after 50*m inner iterations
    """
    A, b = p.stacked()
    u_nom = np.asarray(p.u_nom, dtype=float)
    m = u_nom.shape[0]
    n_rows = A.shape[0]

    if n_rows == 0 or np.all(A @ u_nom - b <= PRIMAL_TOL):
        return QpSolution(
            u_star=tuple(u_nom.tolist()),
            multipliers=(0.0,) * n_rows,
            kkt_residual=0.0,
            status=QpStatus.OPTIMAL,
        )

    # Rows are kept in "n^T u >= d" form internally: n = -a, d = -b.
    normals = -A
    rhs = -b
    x = u_nom.copy()
    active: list[int] = []
    lam: list[float] = []
    max_iter = ITERATIONS_PER_DIMENSION * m
    iterations = 0

    while True:
        slack = normals @ x - rhs
        slack[active] = 0.0
        p_idx = int(np.argmin(slack))
        if slack[p_idx] >= -PRIMAL_TOL:
            break

        n_p = normals[p_idx]
        lam_p = 0.0
        while True:
            iterations += 1
            if iterations > max_iter:
                logger.warning("QP active-set iteration cap %d reached", max_iter)
                return _finish(p, x, active, lam, n_rows, QpStatus.MAX_ITER, iterations)

            if active:
                N = normals[active].T
                r = np.linalg.solve(N.T @ N, N.T @ n_p)
                z = n_p - N @ r
            else:
                r = np.zeros(0)
                z = n_p.copy()

            t1 = np.inf
            drop = -1
            for pos in range(len(active)):
                if r[pos] > ZERO_DIRECTION_TOL:
                    ratio = lam[pos] / r[pos]
                    if ratio <= t1:
                        t1, drop = ratio, pos

            z_norm_sq = float(z @ z)
            if z_norm_sq > ZERO_DIRECTION_TOL**2:
                t2 = -float(n_p @ x - rhs[p_idx]) / float(z @ n_p)
            else:
                t2 = np.inf

            t = min(t1, t2)
            if not np.isfinite(t):
                witness = np.zeros(n_rows)
                witness[p_idx] = 1.0
                for pos, row in enumerate(active):
                    witness[row] = max(0.0, -float(r[pos]))
                logger.debug("QP infeasible; witness rows %s", np.flatnonzero(witness).tolist())
                return QpSolution(
                    u_star=tuple(x.tolist()),
                    active_set=sorted(active),
                    multipliers=tuple(0.0 for _ in range(n_rows)),
                    kkt_residual=np.inf,
                    status=QpStatus.INFEASIBLE,
                    iterations=iterations,
                    infeasibility_witness=tuple(witness.tolist()),
                )

            if np.isfinite(t2):
                x = x + t * z
            lam = [lam[pos] - t * float(r[pos]) for pos in range(len(active))]
            lam_p += t

            if t == t2:
                active.append(p_idx)
                lam.append(lam_p)
                break

            del active[drop]
            del lam[drop]

    return _finish(p, x, active, lam, n_rows, QpStatus.OPTIMAL, iterations)


def _finish(
    p: QpProblem,
    x: Vector,
    active: list[int],
    lam: list[float],
    n_rows: int,
    status: QpStatus,
    iterations: int,
) -> QpSolution:
    """Polish the iterate on its active set and attach the KKT certificate."""
    A, b = p.stacked()
    u_nom = np.asarray(p.u_nom, dtype=float)
    mu = np.zeros(n_rows)
    for row, value in zip(active, lam, strict=True):
        mu[row] = max(0.0, value)

    if status is QpStatus.OPTIMAL and active:
        A_act = A[active]
        refined, *_ = np.linalg.lstsq(A_act @ A_act.T, A_act @ u_nom - b[active], rcond=None)
        if np.all(refined >= -PRIMAL_TOL):
            x = u_nom - A_act.T @ refined
            mu[:] = 0.0
            mu[active] = np.maximum(refined, 0.0)

    residual = kkt_residual(p, x, mu)
    if status is QpStatus.OPTIMAL and residual > KKT_TOL:
        logger.warning("QP solution certificate %.3g exceeds tolerance %.1g", residual, KKT_TOL)
        status = QpStatus.MAX_ITER

    return QpSolution(
        u_star=tuple(x.tolist()),
        active_set=sorted(active),
        multipliers=tuple(mu.tolist()),
        kkt_residual=residual,
        status=status,
        iterations=iterations,
    )
