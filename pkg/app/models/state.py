"""Plant state, input and tether force models."""

from typing import ClassVar

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

Vector = npt.NDArray[np.float64]


class _FrozenVectorModel(BaseModel):
    """Immutable model whose float fields map onto a flat vector."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    FIELDS: ClassVar[tuple[str, ...]] = ()

    def as_array(self) -> Vector:
        """Field values in ``FIELDS`` order."""
        return np.array([getattr(self, name) for name in self.FIELDS], dtype=float)

    @classmethod
    def from_array(cls, values: npt.ArrayLike):
        """Build from a flat vector in ``FIELDS`` order."""
        arr = np.asarray(values, dtype=float).ravel()
        if arr.shape[0] != len(cls.FIELDS):
            raise ValueError(
                f"{cls.__name__} expects {len(cls.FIELDS)} values, got {arr.shape[0]}"
            )
        return cls(**dict(zip(cls.FIELDS, arr.tolist(), strict=True)))


class TuavState(_FrozenVectorModel):
    """Full tethered-UAV state: rigid body plus winch."""

    FIELDS: ClassVar[tuple[str, ...]] = (
        "x",
        "y",
        "z",
        "phi",
        "theta",
        "psi",
        "u",
        "v",
        "w",
        "p",
        "q",
        "r",
        "winch_angle",
        "winch_rate",
    )

    x: float = Field(default=0.0, description="Inertial x position, m")
    y: float = Field(default=0.0, description="Inertial y position, m")
    z: float = Field(default=0.0, description="Inertial z position, m")
    phi: float = Field(default=0.0, description="Roll, rad")
    theta: float = Field(default=0.0, description="Pitch, rad")
    psi: float = Field(default=0.0, description="Yaw, rad")
    u: float = Field(default=0.0, description="x velocity, m/s")
    v: float = Field(default=0.0, description="y velocity, m/s")
    w: float = Field(default=0.0, description="z velocity, m/s")
    p: float = Field(default=0.0, description="Roll rate, rad/s")
    q: float = Field(default=0.0, description="Pitch rate, rad/s")
    r: float = Field(default=0.0, description="Yaw rate, rad/s")
    winch_angle: float = Field(default=0.0, description="Winch angle, rad")
    winch_rate: float = Field(default=0.0, description="Winch rate, rad/s")

    @property
    def position(self) -> Vector:
        return np.array([self.x, self.y, self.z])

    @property
    def velocity(self) -> Vector:
        return np.array([self.u, self.v, self.w])

    @property
    def attitude_valid(self) -> bool:
        """Roll and pitch inside the open interval (-pi/2, pi/2)."""
        half_pi = 0.5 * np.pi
        return abs(self.phi) < half_pi and abs(self.theta) < half_pi


class ControlInput(_FrozenVectorModel):
    """Actuator channels [U_f, U_phi, U_theta, U_psi, U_win]."""

    FIELDS: ClassVar[tuple[str, ...]] = (
        "thrust",
        "torque_roll",
        "torque_pitch",
        "torque_yaw",
        "winch_torque",
    )

    thrust: float = Field(default=0.0, description="Collective thrust U_f, N")
    torque_roll: float = Field(default=0.0, description="U_phi, N·m")
    torque_pitch: float = Field(default=0.0, description="U_theta, N·m")
    torque_yaw: float = Field(default=0.0, description="U_psi, N·m")
    winch_torque: float = Field(default=0.0, description="U_win, N·m")


class TetherForce(BaseModel):
    """Tether tension magnitude, line angles and inertial components."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    magnitude: float = Field(default=0.0, ge=0.0, description="T1, N")
    elevation: float = Field(default=0.0, description="alpha_t, rad")
    azimuth: float = Field(default=0.0, description="beta_t, rad")
    components: tuple[float, float, float] = Field(
        default=(0.0, 0.0, 0.0), description="(T_X, T_Y, T_Z), N"
    )

    @property
    def is_slack(self) -> bool:
        return self.magnitude == 0.0


class PointMassState(_FrozenVectorModel):
    """Point-mass abstraction: position xi and velocity."""

    FIELDS: ClassVar[tuple[str, ...]] = ("x", "y", "z", "vx", "vy", "vz")

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0

    @classmethod
    def from_vectors(cls, position: npt.ArrayLike, velocity: npt.ArrayLike) -> "PointMassState":
        return cls.from_array(np.concatenate([np.ravel(position), np.ravel(velocity)]))

    @property
    def position(self) -> Vector:
        return np.array([self.x, self.y, self.z])

    @property
    def velocity(self) -> Vector:
        return np.array([self.vx, self.vy, self.vz])
