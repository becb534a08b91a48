"""Closed-loop episodes: nominal control, CBF-QP filter, integration and logging."""

import logging
import math

import numpy as np

from app.adapters import BasePlantAdapter, PlantAdapterRegistry
from app.core.exceptions import EpisodeAbortedError, SimulationFault
from app.models import (
    SAFETY_CHECK,
    CbfMode,
    CheckResult,
    InfeasiblePolicy,
    InvariantReport,
    ModelKind,
    QpProblem,
    QpStatus,
    ScenarioConfig,
    ScenarioKind,
    SimState,
    TrajectoryLog,
    TrajectoryRecord,
    TuavState,
)
from app.services.control import lyapunov_diagnostics
from app.services.dynamics import rk4_step
from app.services.qp import solve_active_set
from app.services.reference import build_reference
from app.services.safety import comparison_bound

logger = logging.getLogger(__name__)

SAFETY_TOL = 1e-6
COMPARISON_TOL = 1e-6
TRACKING_TOL = 1e-2
TRACKING_WINDOW = 10.0
INPUT_BOUND_FACTOR = 10.0
INPUT_BOUND_FLOOR = 1.0
LYAPUNOV_TOL_PER_SECOND = 1e-9


class SimulationService:
    """Runs one episode of a scenario; one instance per episode."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.adapter: BasePlantAdapter = PlantAdapterRegistry.get_adapter(config)
        self._bounds = (
            [(-config.input_bound, config.input_bound)] * 3
            if config.input_bound is not None
            else None
        )
        self._warned_infeasible = False
        self._in_recovery = False

    def initial_state(self) -> SimState:
        x0 = self.adapter.initial_state()
        self.adapter.validate_state(x0, 0.0)
        return SimState(t=0.0, step=0, state=tuple(x0.tolist()))

    def sim_step(
        self, sim_state: SimState, records: list[TrajectoryRecord] | None = None
    ) -> SimState:
        """
        Advance one tick: nominal -> constraint -> QP -> RK4 with the input held.

        The record for the *current* tick is appended to ``records`` when given.

        Raises:
            SimulationFault: On non-finite or singular states (time attached)
        """
        x = np.asarray(sim_state.state, dtype=float)
        t = sim_state.t
        try:
            u_applied, record = self._evaluate(x, t)
            x_next = rk4_step(self.adapter.rhs, x, u_applied, self.config.dt)
            step = sim_state.step + 1
            t_next = step * self.config.dt
            self.adapter.validate_state(x_next, t_next)
        except SimulationFault as exc:
            if exc.t is None:
                exc.t = t
            raise

        if records is not None:
            records.append(record)
        return SimState(t=t_next, step=step, state=tuple(x_next.tolist()))

    def final_record(self, sim_state: SimState) -> TrajectoryRecord:
        """Record for the last state, whose input is evaluated but never applied."""
        _, record = self._evaluate(np.asarray(sim_state.state, dtype=float), sim_state.t)
        return record

    def run(self) -> TrajectoryLog:
        """
        Run the whole episode.

        Raises:
            EpisodeAbortedError: Wrapping the fault; ``partial_log`` holds the records so far
        """
        cfg = self.config
        logger.info(
            "Episode %s: model=%s scenario=%s filter=%s duration=%.3g s dt=%.3g s",
            cfg.name,
            cfg.model.value,
            cfg.scenario.value,
            cfg.filter_enabled,
            cfg.duration,
            cfg.dt,
        )
        records: list[TrajectoryRecord] = []
        sim_state = self.initial_state()
        try:
            for _ in range(cfg.steps):
                sim_state = self.sim_step(sim_state, records)
            records.append(self.final_record(sim_state))
        except SimulationFault as exc:
            logger.error("Episode %s aborted: %s", cfg.name, exc)
            raise EpisodeAbortedError(
                f"episode {cfg.name} aborted: {exc.message}", exc.t, partial_log=self._log(records)
            ) from exc

        log = self._log(records)
        summary = log.summarize()
        logger.info(
            "Episode %s finished: min_h=%.6g max_r=%.6g final_error=%.3g interventions=%d",
            cfg.name,
            summary.min_h,
            summary.max_r,
            summary.final_error,
            summary.intervention_steps,
        )
        return log

    def _log(self, records: list[TrajectoryRecord]) -> TrajectoryLog:
        # built once the records are final; the model keeps its own copy of the list
        cfg = self.config
        return TrajectoryLog(scenario=cfg.name, config=cfg, l_max=cfg.cbf.l_max, records=records)

    def _evaluate(self, x: np.ndarray, t: float) -> tuple[np.ndarray, TrajectoryRecord]:
        cfg = self.config
        adapter = self.adapter
        command_nom = adapter.nominal(x, t)
        constraint, psi1 = adapter.constraint(x, command_nom)

        if psi1 is not None and psi1 < 0.0 and not self._in_recovery:
            logger.warning("HOCBF recovery mode entered at t=%.3f s (psi1=%.3g)", t, psi1)
        self._in_recovery = psi1 is not None and psi1 < 0.0

        command_star = command_nom
        status = QpStatus.SKIPPED
        fallback = False
        if cfg.filter_enabled:
            solution = solve_active_set(
                QpProblem(
                    u_nom=tuple(command_nom.tolist()),
                    constraints=[constraint],
                    bounds=self._bounds,
                )
            )
            status = solution.status
            if solution.is_optimal:
                command_star = np.asarray(solution.u_star)
            else:
                command_star = self._fallback(command_nom)
                fallback = True
                if not self._warned_infeasible:
                    logger.warning(
                        "QP %s at t=%.3f s; applying %s",
                        status.value,
                        t,
                        cfg.infeasible_policy.value,
                    )
                    self._warned_infeasible = True
            if constraint.active_hint:
                logger.debug("Constraint active at t=%.3f s", t)

        u_nom = adapter.actuate(x, t, command_nom)
        if command_star is command_nom:
            u_star = u_nom
        else:
            u_star = adapter.actuate(x, t, command_star)

        position = adapter.position(x)
        r = float(np.linalg.norm(position))
        record = TrajectoryRecord(
            t=t,
            state=tuple(x.tolist()),
            position=tuple(position.tolist()),
            reference=adapter.reference.at(t).position,
            u_nom=tuple(u_nom.tolist()),
            u_star=tuple(u_star.tolist()),
            h=cfg.cbf.l_max - r,
            psi1=psi1,
            r=r,
            constraint_active=constraint.active_hint,
            qp_status=status,
            fallback_applied=fallback,
        )
        return u_star, record

    def _fallback(self, command_nom: np.ndarray) -> np.ndarray:
        if self.config.infeasible_policy is InfeasiblePolicy.HOLD_ZERO:
            return np.zeros_like(command_nom)
        if self.config.input_bound is not None:
            bound = self.config.input_bound
            return np.clip(command_nom, -bound, bound)
        return command_nom.copy()


def sim_step(
    sim_state: SimState,
    config: ScenarioConfig,
    records: list[TrajectoryRecord] | None = None,
) -> SimState:
    """Single tick for callers without a long-lived service."""
    return SimulationService(config).sim_step(sim_state, records)


def run_scenario(config: ScenarioConfig) -> TrajectoryLog:
    """Deterministic closed-loop episode of ``config``."""
    return SimulationService(config).run()


def verify_log(log: TrajectoryLog, config: ScenarioConfig | None = None) -> InvariantReport:
    """
    Check a complete log against the safety and performance invariants.

    ``config`` defaults to the one stored on the log; without any config only
    the safety and bounded-input checks apply.

    Checks: safety (min h >= -1e-6), comparison bound (first-order mode with the
    filter on), bounded inputs, final tracking error (setpoints strictly inside
    the sphere) and monotone altitude Lyapunov value (when configured).
    """
    config = config if config is not None else log.config
    report = InvariantReport(scenario=log.scenario)
    if not log.records:
        report.checks.append(
            CheckResult(name=SAFETY_CHECK, passed=False, detail="log has no records")
        )
        return report

    report.checks.append(_check_safety(log))
    report.checks.append(_check_comparison(log, config))
    report.checks.append(_check_input_bound(log, config))
    report.checks.append(_check_tracking(log, config))
    report.checks.append(_check_lyapunov(log, config))

    for failure in report.failures:
        logger.warning("Invariant %s failed for %s: %s", failure.name, log.scenario, failure.detail)
    return report


def _check_safety(log: TrajectoryLog) -> CheckResult:
    offending = next((rec for rec in log.records if rec.h < -SAFETY_TOL), None)
    min_h = min(rec.h for rec in log.records)
    return CheckResult(
        name=SAFETY_CHECK,
        passed=offending is None,
        value=min_h,
        threshold=-SAFETY_TOL,
        detail="" if offending is None else f"h={offending.h:.6g} below zero",
        offending_time=None if offending is None else offending.t,
    )


def _check_comparison(log: TrajectoryLog, config: ScenarioConfig | None) -> CheckResult:
    h0 = log.records[0].h
    applicable = (
        config is not None
        and config.cbf_mode is CbfMode.FIRST_ORDER
        and config.filter_enabled
        and h0 >= 0.0
    )
    if not applicable:
        return CheckResult(name="comparison_bound", applicable=False)

    worst = math.inf
    offending_time = None
    for rec in log.records:
        margin = rec.h - comparison_bound(h0, config.cbf, rec.t)
        if margin < worst:
            worst = margin
        if margin < -COMPARISON_TOL and offending_time is None:
            offending_time = rec.t
    return CheckResult(
        name="comparison_bound",
        passed=offending_time is None,
        value=worst,
        threshold=-COMPARISON_TOL,
        detail="" if offending_time is None else "h fell below h0*exp(-gamma*t)",
        offending_time=offending_time,
    )


def _check_input_bound(log: TrajectoryLog, config: ScenarioConfig | None) -> CheckResult:
    if (
        config is not None
        and config.input_bound is not None
        and config.model is not ModelKind.FULL_TUAV
    ):
        bound = config.input_bound
    else:
        nominal_peak = max((abs(v) for rec in log.records for v in rec.u_nom), default=0.0)
        bound = max(INPUT_BOUND_FACTOR * nominal_peak, INPUT_BOUND_FLOOR)

    peak = 0.0
    offending_time = None
    for rec in log.records:
        mag = max((abs(v) for v in rec.u_star), default=0.0)
        if not math.isfinite(mag) or mag > bound:
            if offending_time is None:
                offending_time = rec.t
        if math.isfinite(mag):
            peak = max(peak, mag)
    return CheckResult(
        name="bounded_input",
        passed=offending_time is None,
        value=peak,
        threshold=bound,
        detail="" if offending_time is None else "|u_star|_inf exceeded the bound",
        offending_time=offending_time,
    )


def _check_tracking(log: TrajectoryLog, config: ScenarioConfig | None) -> CheckResult:
    reachable = (
        config is not None
        and config.scenario is ScenarioKind.SETPOINT
        and float(np.linalg.norm(config.target)) < config.cbf.l_max
    )
    if not reachable:
        return CheckResult(name="tracking", applicable=False)

    t_end = log.records[-1].t
    window = [rec for rec in log.records if rec.t >= t_end - TRACKING_WINDOW - 1e-9]
    worst = max(rec.tracking_error for rec in window)
    offending = next((rec for rec in window if rec.tracking_error >= TRACKING_TOL), None)
    return CheckResult(
        name="tracking",
        passed=offending is None,
        value=worst,
        threshold=TRACKING_TOL,
        detail="" if offending is None else "tracking error not settled in the final window",
        offending_time=None if offending is None else offending.t,
    )


def _check_lyapunov(log: TrajectoryLog, config: ScenarioConfig | None) -> CheckResult:
    full_states = all(len(rec.state) == len(TuavState.FIELDS) for rec in log.records)
    if not (
        config is not None
        and config.lyapunov_check
        and config.model is ModelKind.FULL_TUAV
        and full_states
    ):
        return CheckResult(name="lyapunov", applicable=False)

    tol = LYAPUNOV_TOL_PER_SECOND * config.dt
    reference = build_reference(config)
    previous = None
    offending_time = None
    worst_increase = -math.inf
    for rec in log.records:
        sp = reference.at(rec.t)
        value = lyapunov_diagnostics(
            TuavState.from_array(rec.state), sp.position[2], config.gains, w_des=sp.velocity[2]
        ).value
        if previous is not None:
            increase = value - previous
            worst_increase = max(worst_increase, increase)
            if increase > tol and offending_time is None:
                offending_time = rec.t
        previous = value
    return CheckResult(
        name="lyapunov",
        passed=offending_time is None,
        value=worst_increase,
        threshold=tol,
        detail="" if offending_time is None else "V_c1 increased",
        offending_time=offending_time,
    )
