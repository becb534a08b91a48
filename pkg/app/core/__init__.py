"""Core application components."""

from app.core.config import Settings, settings
from app.core.exceptions import (
    ConfigError,
    EpisodeAbortedError,
    ExportError,
    NonFiniteStateError,
    QpInfeasibleError,
    SimulationFault,
    SingularAttitudeError,
    TuavSimError,
)

__all__ = [
    # Config
    "Settings",
    "settings",
    # Exceptions
    "TuavSimError",
    "ConfigError",
    "QpInfeasibleError",
    "SimulationFault",
    "NonFiniteStateError",
    "SingularAttitudeError",
    "EpisodeAbortedError",
    "ExportError",
]
