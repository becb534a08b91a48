"""TOML scenario configuration: load, validate, override and dump."""

import logging
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 backport
    import tomli as tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import tomli_w
from pydantic import ValidationError

from app.core.exceptions import ConfigError
from app.models import AxisGains, RunManifest, ScenarioConfig, SystemParams

logger = logging.getLogger(__name__)

SECTIONS = ("scenario", "sim", "gains", "cbf", "params", "filter", "check")

_GAIN_AXES = ("x", "y", "phi", "theta", "psi", "winch")

# Dotted config key -> location inside the ScenarioConfig constructor arguments.
KEY_PATHS: dict[str, tuple[str, ...]] = {
    "model": ("model",),
    "scenario.type": ("scenario",),
    "scenario.name": ("name",),
    "scenario.target": ("target",),
    "scenario.start": ("start",),
    "scenario.initial_velocity": ("initial_velocity",),
    "scenario.center": ("center",),
    "scenario.radius": ("radius",),
    "scenario.omega": ("omega",),
    "scenario.speed": ("speed",),
    "scenario.yaw": ("yaw",),
    "scenario.tether_length": ("tether_length",),
    "sim.dt": ("dt",),
    "sim.duration": ("duration",),
    "gains.k1": ("gains", "k1"),
    "gains.k2": ("gains", "k2"),
    "gains.kp": ("gains", "kp"),
    "gains.kd": ("gains", "kd"),
    **{
        f"gains.{axis}.{k}": ("gains", axis, k)
        for axis in _GAIN_AXES
        for k in AxisGains.model_fields
    },
    "cbf.gamma": ("cbf", "gamma"),
    "cbf.lambda": ("cbf", "lambda"),
    "cbf.l_max": ("cbf", "l_max"),
    "cbf.epsilon_origin": ("cbf", "epsilon_origin"),
    "cbf.mode": ("cbf", "mode"),
    **{f"params.{name}": ("params", name) for name in SystemParams.model_fields},
    "filter.enabled": ("filter_enabled",),
    "filter.infeasible_policy": ("infeasible_policy",),
    "filter.input_bound": ("input_bound",),
    "filter.sampled_data": ("sampled_data",),
    "check.lyapunov": ("lyapunov_check",),
}

_PATH_KEYS = {path: key for key, path in KEY_PATHS.items()}

_CONSTRAINT_OPS = {
    "greater_than": ("gt", ">"),
    "greater_than_equal": ("ge", ">="),
    "less_than": ("lt", "<"),
    "less_than_equal": ("le", "<="),
}


def flatten(data: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    """Nested TOML tables to dotted keys; arrays are leaves."""
    flat: dict[str, Any] = {}
    for key, value in data.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def _mirror_l_max(flat: dict[str, Any]) -> dict[str, Any]:
    has_cbf = "cbf.l_max" in flat
    has_params = "params.L_max" in flat
    if has_cbf and not has_params:
        return {**flat, "params.L_max": flat["cbf.l_max"]}
    if has_params and not has_cbf:
        return {**flat, "cbf.l_max": flat["params.L_max"]}
    return flat


def _nest(flat: Mapping[str, Any]) -> dict[str, Any]:
    kwargs: dict[str, Any] = {}
    for key, value in flat.items():
        path = KEY_PATHS.get(key)
        if path is None:
            raise ConfigError(key, "is not a known configuration key")
        target = kwargs
        for part in path[:-1]:
            target = target.setdefault(part, {})
        target[path[-1]] = value
    return kwargs


def _translate(exc: ValidationError) -> ConfigError:
    """First validation error as a ConfigError on the dotted config key."""
    err = exc.errors()[0]
    loc = tuple(str(part) for part in err["loc"])
    field = _PATH_KEYS.get(loc, ".".join(loc))
    ctx = err.get("ctx") or {}
    op = _CONSTRAINT_OPS.get(err["type"])
    if op is not None and op[0] in ctx:
        limit = ctx[op[0]]
        shown = f"{limit:g}" if isinstance(limit, int | float) else limit
        return ConfigError(field, f"must be {op[1]} {shown}")
    if "error" in ctx:
        return ConfigError(field, str(ctx["error"]))
    return ConfigError(field, f"is invalid: {err['msg']}")


def config_from_mapping(flat: Mapping[str, Any]) -> ScenarioConfig:
    """
    Build a validated ScenarioConfig from dotted keys.

    Raises:
        ConfigError: Unknown key or violated invariant, naming the dotted field
    """
    kwargs = _nest(_mirror_l_max(dict(flat)))
    try:
        return ScenarioConfig.model_validate(kwargs)
    except ValidationError as exc:
        raise _translate(exc) from exc


def load_config(path: str | Path) -> ScenarioConfig:
    """
    Parse a TOML scenario file.

    Missing sections fall back to defaults (logged at INFO).

    Raises:
        ConfigError: Missing file, TOML syntax error (line/column from the parser),
            unknown key or invariant violation
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(str(path), "does not exist")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"is not valid TOML: {exc}") from exc

    flat = flatten(data)
    defaulted = [s for s in SECTIONS if s not in data]
    if "model" not in data:
        defaulted.insert(0, "model")
    if defaulted:
        logger.info("%s: using defaults for %s", path, ", ".join(defaulted))

    config = config_from_mapping(flat)
    logger.debug("Loaded %s: model=%s scenario=%s", path, config.model.value, config.scenario.value)
    return config


def config_to_mapping(config: ScenarioConfig) -> dict[str, Any]:
    """Every config value under its dotted key (None values omitted)."""
    dumped = config.model_dump(mode="json", by_alias=True)
    flat: dict[str, Any] = {}
    for key, path in KEY_PATHS.items():
        value: Any = dumped
        for part in path:
            value = value[part]
        if value is not None:
            flat[key] = value
    return flat


def dump_config(config: ScenarioConfig) -> str:
    """TOML text that ``load_config`` turns back into an equal config."""
    nested: dict[str, Any] = {}
    for key, value in config_to_mapping(config).items():
        target = nested
        *parents, leaf = key.split(".")
        for part in parents:
            target = target.setdefault(part, {})
        target[leaf] = value
    return tomli_w.dumps(nested)


def apply_overrides(config: ScenarioConfig, overrides: Mapping[str, Any]) -> ScenarioConfig:
    """
    Config with dotted-key overrides applied on top.

    Overriding one of ``cbf.l_max``/``params.L_max`` moves the other with it.

    Raises:
        ConfigError: Unknown key or violated invariant
    """
    if not overrides:
        return config
    merged = {**config_to_mapping(config), **_mirror_l_max(flatten(overrides))}
    return config_from_mapping(merged)


MANIFEST_KEYS = ("output_dir", "formats", "verbosity", "base_config", "overrides", "batch")


def load_manifest(path: str | Path, **cli_fields: Any) -> RunManifest:
    """
    Parse a suite manifest (TOML).

    Relative ``base_config`` and ``batch`` paths resolve against the manifest's
    directory. ``cli_fields`` (non-None values only) take precedence over the file.

    Raises:
        ConfigError: Missing file, syntax error, unknown key or invalid value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(str(path), "does not exist")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"is not valid TOML: {exc}") from exc

    unknown = sorted(set(data) - set(MANIFEST_KEYS))
    if unknown:
        raise ConfigError(unknown[0], "is not a known manifest key")

    root = path.parent
    if "base_config" in data:
        data["base_config"] = str(root / data["base_config"])
    if "batch" in data:
        data["batch"] = [str(root / entry) for entry in data["batch"]]
    if "formats" in data and isinstance(data["formats"], str):
        data["formats"] = [data["formats"]]
    data["overrides"] = flatten(data.get("overrides", {}))
    data.update({k: v for k, v in cli_fields.items() if v is not None})

    try:
        return RunManifest.model_validate({"config_path": str(path), **data})
    except ValidationError as exc:
        raise _translate(exc) from exc
