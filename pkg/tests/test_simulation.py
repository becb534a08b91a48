"""Closed-loop episode and invariant-check tests."""

import numpy as np
import pytest

from app.core.exceptions import EpisodeAbortedError, NonFiniteStateError
from app.models import (
    CbfSpec,
    InfeasiblePolicy,
    ModelKind,
    QpStatus,
    ScenarioKind,
    SimState,
    TrajectoryLog,
)
from app.services.export import write_trajectory_csv
from app.services.simulation import SimulationService, run_scenario, sim_step, verify_log
from tests.conftest import make_config, make_log, make_record


class TestCanonicalScenarios:
    @pytest.mark.parametrize("name", ["inside_setpoint", "outside_setpoint", "circle_track"])
    def test_filter_keeps_barrier_nonnegative(self, canonical_logs, name):
        log = canonical_logs[name]
        assert log.summary.min_h >= -1e-6
        assert verify_log(log).safety_passed

    def test_inside_setpoint_converges(self, canonical_logs):
        log = canonical_logs["inside_setpoint"]
        assert log.summary.final_error < 1e-2
        assert log.summary.min_h > 0.0
        report = verify_log(log)
        assert report.get("tracking").applicable
        assert report.passed

    def test_outside_setpoint_settles_on_the_sphere(self, canonical_logs):
        log = canonical_logs["outside_setpoint"]
        final = log.records[-1]
        assert final.r == pytest.approx(13.0, abs=1e-2)
        direction = np.asarray(final.position) / final.r
        target = np.array([10.0, 10.0, 8.0])
        np.testing.assert_allclose(direction, target / np.linalg.norm(target), atol=1e-6)

    def test_circle_is_clipped_to_the_sphere(self, canonical_logs):
        log = canonical_logs["circle_track"]
        assert log.summary.max_r <= 13.0 + 1e-3
        assert log.summary.intervention_steps > 0

    def test_ablation_leaves_the_sphere(self, canonical_logs):
        log = canonical_logs["outside_setpoint_ablation"]
        assert log.summary.max_r > 13.0
        assert all(rec.qp_status is QpStatus.SKIPPED for rec in log.records)
        assert not verify_log(log).safety_passed

    def test_record_count_and_time_grid(self, canonical_logs):
        log = canonical_logs["inside_setpoint"]
        assert len(log.records) == 6001
        assert log.records[-1].t == pytest.approx(60.0)
        assert log.records[1].t == pytest.approx(0.01)


class TestFilterBehaviour:
    def test_minimal_intervention_far_from_boundary(self):
        config = make_config(duration=10.0, cbf=CbfSpec(gamma=5.0, lambda_=5.0))
        log = run_scenario(config)
        assert all(rec.u_star == rec.u_nom for rec in log.records)
        assert log.summary.intervention_steps == 0

    def test_filter_off_applies_nominal(self):
        log = run_scenario(make_config(duration=1.0, target=(10.0, 10.0, 8.0), filter_enabled=False))
        assert all(rec.u_star == rec.u_nom for rec in log.records)

    def test_h_and_r_are_consistent(self):
        log = run_scenario(make_config(duration=2.0, target=(10.0, 10.0, 8.0)))
        for rec in log.records:
            assert rec.r + rec.h == pytest.approx(13.0)
            assert rec.r == pytest.approx(float(np.linalg.norm(rec.position)))

    @pytest.mark.parametrize(
        ("policy", "expected"),
        [
            (InfeasiblePolicy.HOLD_ZERO, (0.0, 0.0, 0.0)),
            (InfeasiblePolicy.CLIP_NOMINAL, (1.0, 1.0, -1.0)),
        ],
    )
    def test_infeasible_qp_falls_back(self, policy, expected, caplog):
        config = make_config(
            start=(0.0, 0.0, 12.9),
            initial_velocity=(0.0, 0.0, 5.0),
            input_bound=1.0,
            infeasible_policy=policy,
            duration=0.05,
        )
        log = run_scenario(config)
        first = log.records[0]
        assert first.qp_status is QpStatus.INFEASIBLE
        assert first.fallback_applied
        assert first.u_star == pytest.approx(expected)
        assert "applying" in caplog.text

    def test_recovery_mode_when_starting_outside(self, caplog):
        config = make_config(start=(0.0, 0.0, 14.0), target=(0.0, 0.0, 5.0), duration=10.0)
        log = run_scenario(config)
        assert log.records[0].psi1 < 0.0
        assert log.records[-1].h > 0.0
        assert "recovery mode" in caplog.text


class TestFirstOrderSampledData:
    @staticmethod
    def _config(**overrides):
        return make_config(
            model=ModelKind.SINGLE_INTEGRATOR,
            start=(1.0, 0.0, 0.0),
            target=(20.0, 0.0, 0.0),
            duration=5.0,
            **overrides,
        )

    def test_comparison_bound_holds(self):
        report = verify_log(run_scenario(self._config()))
        check = report.get("comparison_bound")
        assert check.applicable
        assert check.passed
        assert report.safety_passed

    def test_continuous_slope_undershoots_the_bound(self):
        report = verify_log(run_scenario(self._config(sampled_data=False)))
        check = report.get("comparison_bound")
        assert check.applicable
        assert not check.passed
        assert check.offending_time is not None

    def test_not_applicable_without_filter(self):
        report = verify_log(run_scenario(self._config(filter_enabled=False)))
        assert not report.get("comparison_bound").applicable


class TestLinearTrack:
    def test_ramp_reaches_and_holds_the_target(self):
        config = make_config(
            scenario=ScenarioKind.LINEAR_TRACK,
            start=(0.0, 0.0, 5.0),
            target=(3.0, 4.0, 5.0),
            speed=1.0,
            duration=20.0,
        )
        log = run_scenario(config)
        # 5 m at 1 m/s: halfway at 2.5 s, then held
        assert log.records[250].reference == pytest.approx((1.5, 2.0, 5.0))
        assert log.records[-1].reference == pytest.approx((3.0, 4.0, 5.0))
        assert log.summary.final_error < 1e-3
        assert log.summary.min_h > 0.0
        assert verify_log(log).safety_passed


class TestFullTuav:
    def test_in_sphere_setpoint(self):
        # x-z plane: the y row has no roll authority at hover thrust
        config = make_config(
            model=ModelKind.FULL_TUAV, start=(1.0, 0.0, 4.0), target=(2.0, 0.0, 5.0), duration=30.0
        )
        log = run_scenario(config)
        assert len(log.records) == config.steps + 1
        assert len(log.records[0].state) == 14
        assert len(log.records[0].u_star) == 5
        assert log.summary.min_h >= -1e-6
        assert log.summary.final_error < 0.05
        assert max(abs(rec.position[1]) for rec in log.records) == 0.0

    def test_altitude_lyapunov_check(self):
        config = make_config(
            model=ModelKind.FULL_TUAV,
            start=(0.0, 0.0, 6.0),
            target=(0.0, 0.0, 5.0),
            duration=5.0,
            lyapunov_check=True,
        )
        report = verify_log(run_scenario(config))
        check = report.get("lyapunov")
        assert check.applicable
        assert check.passed


class TestDeterminismAndFaults:
    def test_identical_runs_produce_identical_logs(self):
        config = make_config(duration=2.0, scenario=ScenarioKind.CIRCULAR_TRACK)
        first = run_scenario(config)
        second = run_scenario(config)
        assert len(first.records) == config.steps + 1
        assert first.model_dump_json() == second.model_dump_json()

    def test_identical_runs_emit_identical_csv(self, tmp_path):
        config = make_config(duration=2.0, scenario=ScenarioKind.CIRCULAR_TRACK)
        first = write_trajectory_csv(run_scenario(config), tmp_path / "first.csv")
        second = write_trajectory_csv(run_scenario(config), tmp_path / "second.csv")
        assert first.read_bytes() == second.read_bytes()
        assert len(first.read_text(encoding="utf-8").splitlines()) == 1 + 201

    def test_every_step_is_recorded(self):
        config = make_config(duration=0.05)
        log = run_scenario(config)
        assert config.steps == 5
        assert len(log.records) == 6
        assert [rec.t for rec in log.records] == pytest.approx([0.0, 0.01, 0.02, 0.03, 0.04, 0.05])
        assert np.isfinite(log.summary.min_h)

    def test_single_tick(self):
        config = make_config(duration=1.0)
        records = []
        nxt = sim_step(SimState(state=(0.0,) * 6), config, records)
        assert nxt.step == 1
        assert nxt.t == pytest.approx(0.01)
        assert len(records) == 1
        assert records[0].t == 0.0

    def test_fault_aborts_with_partial_log(self, monkeypatch):
        import app.services.simulation as simulation

        real_step = simulation.rk4_step
        calls = {"n": 0}

        def flaky_step(*args, **kwargs):
            calls["n"] += 1
            if calls["n"] == 3:
                raise NonFiniteStateError("rk4 stage k1")
            return real_step(*args, **kwargs)

        monkeypatch.setattr(simulation, "rk4_step", flaky_step)
        with pytest.raises(EpisodeAbortedError) as excinfo:
            run_scenario(make_config(duration=1.0))

        assert excinfo.value.t == pytest.approx(0.02)
        assert len(excinfo.value.partial_log.records) == 2

    def test_initial_state_by_model(self):
        tuav = SimulationService(make_config(model=ModelKind.FULL_TUAV, start=(1.0, 2.0, 3.0)))
        state = tuav.initial_state().state
        assert state[:3] == (1.0, 2.0, 3.0)
        assert state[12] == pytest.approx(260.0)


class TestVerifyLog:
    def test_negative_h_fails_safety(self):
        report = verify_log(make_log([5.0, 12.0, 13.5, 12.5]))
        safety = report.get("safety")
        assert not safety.passed
        assert safety.offending_time == pytest.approx(0.02)
        assert safety.value == pytest.approx(-0.5)

    def test_small_rounding_is_tolerated(self):
        assert verify_log(make_log([12.0, 13.0 + 5e-7])).safety_passed

    def test_without_config_only_generic_checks_apply(self):
        report = verify_log(make_log([1.0, 2.0, 3.0]))
        applicable = {c.name for c in report.checks if c.applicable}
        assert applicable == {"safety", "bounded_input"}

    def test_empty_log_fails(self):
        report = verify_log(make_log([]))
        assert not report.safety_passed

    @staticmethod
    def _input_log(nominal: list[float], filtered: list[float]) -> TrajectoryLog:
        records = [
            make_record(i * 0.01, 5.0, u_nom=(n, 0.0, 0.0), u_star=(f, 0.0, 0.0))
            for i, (n, f) in enumerate(zip(nominal, filtered, strict=True))
        ]
        return TrajectoryLog(scenario="handmade", l_max=13.0, records=records)

    def test_zero_first_nominal_does_not_zero_the_bound(self):
        check = verify_log(self._input_log([0.0, 0.5, 0.2], [0.0, 0.5, 0.2])).get("bounded_input")
        assert check.passed
        assert check.threshold == pytest.approx(5.0)

    def test_all_zero_nominal_uses_the_floor(self):
        check = verify_log(self._input_log([0.0, 0.0], [0.0, 0.3])).get("bounded_input")
        assert check.passed
        assert check.threshold == pytest.approx(1.0)

    def test_input_above_the_bound_fails(self):
        check = verify_log(self._input_log([0.5, 0.5], [0.5, 6.0])).get("bounded_input")
        assert not check.passed
        assert check.offending_time == pytest.approx(0.01)
