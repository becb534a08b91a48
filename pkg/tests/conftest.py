"""Shared fixtures for the simulator tests."""

import numpy as np
import pytest

from app.models import (
    CbfSpec,
    ModelKind,
    ScenarioConfig,
    ScenarioKind,
    SystemParams,
    TrajectoryLog,
    TrajectoryRecord,
)
from app.services.simulation import run_scenario
from app.services.suite import canonical_suite


@pytest.fixture
def params() -> SystemParams:
    return SystemParams()


@pytest.fixture
def spec() -> CbfSpec:
    return CbfSpec()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def make_config(**overrides) -> ScenarioConfig:
    """Double-integrator setpoint config with keyword overrides."""
    data = {
        "model": ModelKind.DOUBLE_INTEGRATOR,
        "scenario": ScenarioKind.SETPOINT,
        **overrides,
    }
    return ScenarioConfig.model_validate(data)


def make_record(t: float, r: float, l_max: float = 13.0, **fields) -> TrajectoryRecord:
    """Record of a point on the z axis at distance ``r`` from the anchor."""
    values = {
        "t": t,
        "state": (0.0, 0.0, r),
        "position": (0.0, 0.0, r),
        "reference": (0.0, 0.0, r),
        "u_nom": (1.0, 0.0, 0.0),
        "u_star": (1.0, 0.0, 0.0),
        "h": l_max - r,
        "r": r,
        **fields,
    }
    return TrajectoryRecord(**values)


def make_log(radii: list[float], dt: float = 0.01, l_max: float = 13.0) -> TrajectoryLog:
    return TrajectoryLog(
        scenario="handmade",
        l_max=l_max,
        records=[make_record(i * dt, r, l_max) for i, r in enumerate(radii)],
    )


@pytest.fixture(scope="session")
def canonical_logs() -> dict[str, TrajectoryLog]:
    """The four canonical double-integrator episodes, run once per session."""
    return {entry.name: run_scenario(entry.config) for entry in canonical_suite()}
