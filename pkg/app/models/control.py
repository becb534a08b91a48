"""Outputs of the nominal controllers."""

from pydantic import BaseModel, ConfigDict


class LyapunovDiagnostics(BaseModel):
    """Composite altitude Lyapunov value and its analytic derivative."""

    model_config = ConfigDict(frozen=True)

    value: float
    derivative: float


class AttitudeCommand(BaseModel):
    """Attitude torques plus the commanded tilt that produced them."""

    model_config = ConfigDict(frozen=True)

    torque_roll: float
    torque_pitch: float
    torque_yaw: float
    phi_cmd: float
    theta_cmd: float
    saturated: bool = False

    @property
    def torques(self) -> tuple[float, float, float]:
        return (self.torque_roll, self.torque_pitch, self.torque_yaw)
