"""Command-line front end tests: exit codes and emitted files."""

import json

import numpy as np
import pytest

from app import cli
from app.models import EmitFormat, SuiteReport
from app.services.export import write_trajectory_csv
from tests.conftest import make_log

SHORT_RUN = """
[scenario]
name = "{name}"
target = [{target}]

[sim]
duration = {duration}
"""


def scenario_file(tmp_path, name="short", target="2.0, 2.0, 5.0", duration=2.0, extra=""):
    path = tmp_path / f"{name}.toml"
    path.write_text(
        SHORT_RUN.format(name=name, target=target, duration=duration) + extra, encoding="utf-8"
    )
    return path


class TestRun:
    def test_writes_csv_and_config_copy(self, tmp_path, capsys):
        out = tmp_path / "out"
        status = cli.main(["run", str(scenario_file(tmp_path)), "--out", str(out)])

        assert status == cli.EXIT_OK
        lines = (out / "short.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 201
        assert (out / "short.toml").is_file()
        # a 2 s run is too short for the tracking check, which does not gate the exit code
        printed = capsys.readouterr().out
        assert "[FAIL] short" in printed
        assert "ok   safety" in printed

    def test_json_format(self, tmp_path):
        out = tmp_path / "out"
        status = cli.main(["run", str(scenario_file(tmp_path)), "--out", str(out), "--format", "json"])
        assert status == cli.EXIT_OK
        document = json.loads((out / "short.json").read_text(encoding="utf-8"))
        assert document["summary"]["record_count"] == 201
        assert not (out / "short.csv").exists()

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        path = scenario_file(tmp_path, extra="\n[cbf]\ngamma = -1.0\n")
        assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == cli.EXIT_CONFIG
        assert "cbf.gamma must be > 0" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path):
        status = cli.main(["run", str(tmp_path / "absent.toml"), "--out", str(tmp_path)])
        assert status == cli.EXIT_CONFIG

    def test_no_filter_outside_target_fails_safety(self, tmp_path):
        path = scenario_file(tmp_path, name="escape", target="10.0, 10.0, 8.0", duration=5.0)
        status = cli.main(["run", str(path), "--out", str(tmp_path / "out"), "--no-filter"])
        assert status == cli.EXIT_SAFETY

    def test_filter_keeps_outside_target_safe(self, tmp_path):
        path = scenario_file(tmp_path, name="held", target="10.0, 10.0, 8.0", duration=5.0)
        assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == cli.EXIT_OK

    def test_unwritable_output_exits_3(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("", encoding="utf-8")
        status = cli.main(["run", str(scenario_file(tmp_path)), "--out", str(blocker / "out")])
        assert status == cli.EXIT_FAULT


class TestCheck:
    def test_emitted_log_passes(self, tmp_path):
        config_path = scenario_file(tmp_path)
        out = tmp_path / "out"
        cli.main(["run", str(config_path), "--out", str(out)])

        assert cli.main(["check", str(out / "short.csv")]) == cli.EXIT_OK
        assert cli.main(["check", str(out / "short.csv"), "--config", str(config_path)]) == cli.EXIT_OK

    def test_negative_h_fails(self, tmp_path, capsys):
        path = write_trajectory_csv(make_log([12.0, 13.5, 12.0]), tmp_path / "bad.csv")
        assert cli.main(["check", str(path)]) == cli.EXIT_SAFETY
        assert "FAIL" in capsys.readouterr().out

    def test_foreign_csv_exits_3(self, tmp_path):
        path = tmp_path / "foreign.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        assert cli.main(["check", str(path)]) == cli.EXIT_FAULT


class TestSuite:
    def test_canonical_suite_passes(self, tmp_path):
        out = tmp_path / "suite"
        assert cli.main(["suite", "--out", str(out)]) == cli.EXIT_OK

        names = sorted(p.stem for p in out.glob("*.csv"))
        assert names == [
            "circle_track",
            "inside_setpoint",
            "outside_setpoint",
            "outside_setpoint_ablation",
        ]
        report = json.loads((out / "suite_report.json").read_text(encoding="utf-8"))
        assert len(report["entries"]) == 4

    def test_short_tether_override(self, tmp_path):
        manifest = tmp_path / "manifest.toml"
        manifest.write_text(
            f'output_dir = "{(tmp_path / "short").as_posix()}"\n\n'
            "[overrides]\n"
            '"cbf.l_max" = 5.0\n'
            '"sim.duration" = 10.0\n',
            encoding="utf-8",
        )
        assert cli.main(["suite", str(manifest)]) == cli.EXIT_OK
        table = np.genfromtxt(
            tmp_path / "short" / "inside_setpoint.csv",
            delimiter=",",
            names=True,
            dtype=None,
            encoding="utf-8",
        )
        assert table["h"].min() >= -1e-6
        np.testing.assert_allclose(table["r"] + table["h"], 5.0)

    def test_no_filter_fails_critical_entries(self, tmp_path):
        manifest = tmp_path / "manifest.toml"
        manifest.write_text('[overrides]\n"sim.duration" = 5.0\n', encoding="utf-8")
        status = cli.main(["suite", str(manifest), "--out", str(tmp_path / "out"), "--no-filter"])
        assert status == cli.EXIT_SAFETY

    def test_batch_manifest(self, tmp_path):
        scenario_file(tmp_path, name="alpha", duration=1.0)
        scenario_file(tmp_path, name="beta", target="0.0, 0.0, 20.0", duration=1.0)
        manifest = tmp_path / "manifest.toml"
        manifest.write_text('batch = ["alpha.toml", "beta.toml"]\nformats = "both"\n', encoding="utf-8")

        out = tmp_path / "out"
        assert cli.main(["suite", str(manifest), "--out", str(out)]) == cli.EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == [
            "alpha.csv",
            "alpha.json",
            "beta.csv",
            "beta.json",
            "suite_report.json",
        ]

    def test_flags_without_manifest(self, tmp_path, monkeypatch):
        captured = {}

        def fake_run_suite(manifest):
            captured["manifest"] = manifest
            return SuiteReport()

        monkeypatch.setattr(cli, "run_suite", fake_run_suite)
        out = tmp_path / "flags"
        status = cli.main(["suite", "--out", str(out), "--format", "json", "-v"])

        assert status == cli.EXIT_OK
        manifest = captured["manifest"]
        assert manifest.output_dir == str(out)
        assert manifest.formats == [EmitFormat.JSON]
        assert manifest.verbosity == 2

    def test_unwritable_entry_does_not_stop_the_suite(self, tmp_path, capsys):
        scenario_file(tmp_path, name="alpha", duration=1.0)
        scenario_file(tmp_path, name="beta", duration=1.0)
        manifest = tmp_path / "manifest.toml"
        manifest.write_text('batch = ["alpha.toml", "beta.toml"]\n', encoding="utf-8")
        out = tmp_path / "out"
        (out / "alpha.csv").mkdir(parents=True)

        assert cli.main(["suite", str(manifest), "--out", str(out)]) == cli.EXIT_FAULT
        assert (out / "beta.csv").is_file()
        report = json.loads((out / "suite_report.json").read_text(encoding="utf-8"))
        alpha, beta = report["entries"]
        assert "alpha.csv" in alpha["error"]
        assert alpha["report"] is not None
        assert beta["error"] is None
        assert "[ABORTED] alpha" in capsys.readouterr().out

    def test_aborted_entry_exits_3(self, tmp_path, monkeypatch):
        from app.core.exceptions import EpisodeAbortedError
        from app.services import suite as suite_module

        def abort(config):
            raise EpisodeAbortedError(f"episode {config.name} aborted: injected", 0.5)

        monkeypatch.setattr(suite_module, "run_scenario", abort)
        manifest = tmp_path / "manifest.toml"
        manifest.write_text('[overrides]\n"sim.duration" = 1.0\n', encoding="utf-8")
        assert cli.main(["suite", str(manifest), "--out", str(tmp_path / "out")]) == cli.EXIT_FAULT


class TestSeedless:
    def test_deterministic_run_passes(self, tmp_path):
        path = scenario_file(tmp_path, duration=0.5)
        assert cli.main(["run", str(path), "--out", str(tmp_path / "out"), "--seedless"]) == cli.EXIT_OK

    def test_touching_the_generator_is_a_fault(self, tmp_path, monkeypatch):
        real_run = cli.run_scenario

        def noisy_run(config):
            np.random.random()
            return real_run(config)

        monkeypatch.setattr(cli, "run_scenario", noisy_run)
        path = scenario_file(tmp_path, duration=0.5)
        status = cli.main(["run", str(path), "--out", str(tmp_path / "out"), "--seedless"])
        assert status == cli.EXIT_FAULT


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["--version"])
    assert excinfo.value.code == 0
    assert "tuav-cbf" in capsys.readouterr().out
