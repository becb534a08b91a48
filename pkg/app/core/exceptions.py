"""Custom exceptions for the simulator."""


class TuavSimError(Exception):
    """Base exception for the TUAV safety simulator."""


class ConfigError(TuavSimError):
    """Invalid, unknown or unparsable configuration."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field} {message}" if field else message)


class QpInfeasibleError(TuavSimError):
    """A closed-form projection was asked for an empty half-space."""


class SimulationFault(TuavSimError):
    """Base class for runtime faults that abort an episode."""

    def __init__(self, message: str, t: float | None = None):
        self.message = message
        self.t = t
        super().__init__(message if t is None else f"{message} (t={t:.6g} s)")


class NonFiniteStateError(SimulationFault):
    """A derivative row or an integrator stage produced a non-finite value."""

    def __init__(self, where: str, t: float | None = None):
        self.where = where
        super().__init__(f"non-finite value in {where}", t)


class SingularAttitudeError(SimulationFault):
    """cos(theta)·cos(phi) too close to zero for a thrust inversion."""


class EpisodeAbortedError(SimulationFault):
    """An episode stopped before reaching its configured duration."""

    def __init__(self, message: str, t: float | None = None, partial_log=None):
        self.partial_log = partial_log
        super().__init__(message, t)


class ExportError(TuavSimError):
    """Writing or reading a trajectory file failed."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
