"""Tests for TOML scenario configuration and suite manifests."""

import logging
from pathlib import Path

import pytest

from app.core.exceptions import ConfigError
from app.models import CbfMode, EmitFormat, InfeasiblePolicy, ModelKind, ScenarioConfig, ScenarioKind
from app.services.config_loader import (
    apply_overrides,
    config_to_mapping,
    dump_config,
    flatten,
    load_config,
    load_manifest,
)


def write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        config = load_config(write(tmp_path / "empty.toml", ""))
        assert config == ScenarioConfig()
        assert config.cbf_mode is CbfMode.EXPONENTIAL_SECOND_ORDER

    def test_full_document(self, tmp_path):
        path = write(
            tmp_path / "circle.toml",
            """
model = "single_integrator"

[scenario]
type = "circular_track"
name = "wide_circle"
center = [0.0, 0.0, 4.0]
radius = 20.0

[sim]
dt = 0.005
duration = 12.0

[gains]
kp = 2.0

[gains.x]
k1 = 3.0

[cbf]
gamma = 0.5

[filter]
infeasible_policy = "clip_nominal"
input_bound = 8.0
sampled_data = false
""",
        )
        config = load_config(path)
        assert config.model is ModelKind.SINGLE_INTEGRATOR
        assert config.scenario is ScenarioKind.CIRCULAR_TRACK
        assert config.name == "wide_circle"
        assert config.center == (0.0, 0.0, 4.0)
        assert config.steps == 2400
        assert config.gains.kp == 2.0
        assert config.gains.x.k1 == 3.0
        assert config.gains.x.k2 == 1.0
        assert config.cbf.gamma == 0.5
        assert config.cbf_mode is CbfMode.FIRST_ORDER
        assert config.infeasible_policy is InfeasiblePolicy.CLIP_NOMINAL
        assert config.input_bound == 8.0
        assert not config.sampled_data

    def test_negative_gamma_names_the_field(self, tmp_path):
        with pytest.raises(ConfigError, match="cbf.gamma must be > 0") as excinfo:
            load_config(write(tmp_path / "bad.toml", "[cbf]\ngamma = -1.0\n"))
        assert excinfo.value.field == "cbf.gamma"

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("[sim]\ndt = 0.0\n", "sim.dt must be > 0"),
            ("[sim]\ndt = 0.5\n", "sim.dt must be <= 0.1"),
            ("[params]\nm = 0.0\n", "params.m must be > 0"),
            ("[cbf]\nlambda = 0.0\n", "cbf.lambda must be > 0"),
            ('model = "rotorcraft"\n', "model"),
        ],
    )
    def test_invalid_values(self, tmp_path, text, message):
        with pytest.raises(ConfigError, match=message):
            load_config(write(tmp_path / "bad.toml", text))

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("[cbf]\ngamma = -1.0\n", "cbf.gamma must be > 0"),
            ("[sim]\ndt = 0.5\n", "sim.dt must be <= 0.1"),
        ],
    )
    def test_limits_print_without_trailing_zeros(self, tmp_path, text, message):
        with pytest.raises(ConfigError) as excinfo:
            load_config(write(tmp_path / "bad.toml", text))
        assert str(excinfo.value) == message

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="is not a known configuration key") as excinfo:
            load_config(write(tmp_path / "bad.toml", "[cbf]\nalpha = 1.0\n"))
        assert excinfo.value.field == "cbf.alpha"

    def test_syntax_error_reports_line(self, tmp_path):
        with pytest.raises(ConfigError, match="line"):
            load_config(write(tmp_path / "bad.toml", "[cbf]\ngamma = \n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(tmp_path / "absent.toml")

    def test_defaulted_sections_are_logged(self, tmp_path, caplog):
        caplog.set_level(logging.INFO, logger="app.services.config_loader")
        load_config(write(tmp_path / "partial.toml", "[cbf]\ngamma = 2.0\n"))
        assert "using defaults for" in caplog.text
        assert "sim" in caplog.text

    def test_l_max_mirrors_into_params(self, tmp_path):
        config = load_config(write(tmp_path / "short.toml", "[cbf]\nl_max = 10.0\n"))
        assert config.cbf.l_max == 10.0
        assert config.params.L_max == 10.0

    def test_l_max_conflict(self, tmp_path):
        text = "[cbf]\nl_max = 10.0\n\n[params]\nL_max = 12.0\n"
        with pytest.raises(ConfigError, match="must agree"):
            load_config(write(tmp_path / "bad.toml", text))

    def test_mode_must_match_model(self, tmp_path):
        text = 'model = "single_integrator"\n\n[cbf]\nmode = "exponential_second_order"\n'
        with pytest.raises(ConfigError, match="not usable"):
            load_config(write(tmp_path / "bad.toml", text))

    def test_tether_length_above_l_max(self, tmp_path):
        with pytest.raises(ConfigError, match="tether_length"):
            load_config(write(tmp_path / "bad.toml", "[scenario]\ntether_length = 14.0\n"))


class TestDumpConfig:
    def test_reload_is_identity(self, tmp_path):
        config = ScenarioConfig.model_validate(
            {
                "name": "roundtrip",
                "model": ModelKind.FULL_TUAV,
                "scenario": ScenarioKind.LINEAR_TRACK,
                "target": (3.0, -1.0, 6.5),
                "tether_length": 11.0,
                "input_bound": 25.0,
                "lyapunov_check": True,
                "cbf": {"gamma": 1.5, "lambda": 0.75},
            }
        )
        path = write(tmp_path / "roundtrip.toml", dump_config(config))
        assert load_config(path) == config

    def test_none_values_are_omitted(self):
        mapping = config_to_mapping(ScenarioConfig())
        assert "filter.input_bound" not in mapping
        assert "scenario.tether_length" not in mapping
        assert mapping["cbf.lambda"] == 1.0


class TestOverrides:
    def test_dotted_and_nested_forms(self):
        base = ScenarioConfig()
        dotted = apply_overrides(base, {"cbf.gamma": 2.0, "sim.duration": 5.0})
        nested = apply_overrides(base, {"cbf": {"gamma": 2.0}, "sim": {"duration": 5.0}})
        assert dotted == nested
        assert dotted.cbf.gamma == 2.0
        assert dotted.duration == 5.0

    def test_empty_overrides_return_the_same_config(self):
        base = ScenarioConfig()
        assert apply_overrides(base, {}) is base

    def test_l_max_override_moves_both(self):
        config = apply_overrides(ScenarioConfig(), {"cbf.l_max": 5.0})
        assert config.cbf.l_max == config.params.L_max == 5.0

    def test_unknown_override(self):
        with pytest.raises(ConfigError, match="filter.strength"):
            apply_overrides(ScenarioConfig(), {"filter.strength": 1.0})

    def test_flatten(self):
        assert flatten({"a": {"b": 1, "c": {"d": [1, 2]}}, "e": 3}) == {
            "a.b": 1,
            "a.c.d": [1, 2],
            "e": 3,
        }


class TestLoadManifest:
    def test_paths_resolve_against_manifest_directory(self, tmp_path):
        path = write(
            tmp_path / "suite" / "manifest.toml",
            """
output_dir = "results"
formats = "json"
base_config = "base.toml"
batch = ["one.toml", "more/two.toml"]

[overrides]
"sim.duration" = 5.0
cbf = { gamma = 2.0 }
""",
        )
        manifest = load_manifest(path)
        root = tmp_path / "suite"
        assert manifest.base_config == str(root / "base.toml")
        assert manifest.batch == [str(root / "one.toml"), str(root / "more" / "two.toml")]
        assert manifest.formats == [EmitFormat.JSON]
        assert manifest.overrides == {"sim.duration": 5.0, "cbf.gamma": 2.0}
        assert manifest.config_path == str(path)

    def test_cli_fields_take_precedence(self, tmp_path):
        path = write(tmp_path / "manifest.toml", 'output_dir = "from_file"\nverbosity = 0\n')
        manifest = load_manifest(path, output_dir="from_cli", verbosity=None)
        assert manifest.output_dir == "from_cli"
        assert manifest.verbosity == 0

    def test_unknown_key(self, tmp_path):
        path = write(tmp_path / "manifest.toml", "parallel = true\n")
        with pytest.raises(ConfigError, match="parallel is not a known manifest key"):
            load_manifest(path)

    def test_invalid_verbosity(self, tmp_path):
        path = write(tmp_path / "manifest.toml", "verbosity = 5\n")
        with pytest.raises(ConfigError, match="verbosity must be <= 2"):
            load_manifest(path)
