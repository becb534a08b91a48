"""Physical parameters, controller gains and barrier settings."""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.enums import CbfMode


class SystemParams(BaseModel):
    """Airframe, tether and winch constants."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    m: float = Field(default=2.84, gt=0, description="Mass, kg")
    g: float = Field(default=9.81, description="Gravitational acceleration, m/s^2")
    Ixx: float = Field(default=0.5192, gt=0, description="Roll inertia, kg·m^2")
    Iyy: float = Field(default=0.4929, gt=0, description="Pitch inertia, kg·m^2")
    Izz: float = Field(default=0.0947, gt=0, description="Yaw inertia, kg·m^2")
    Ax: float = Field(default=0.1, ge=0, description="x drag coefficient, N·s/m")
    Ay: float = Field(default=0.1, ge=0, description="y drag coefficient, N·s/m")
    Az: float = Field(default=0.1, ge=0, description="z drag coefficient, N·s/m")
    rho_tether: float = Field(default=0.034, ge=0, description="Tether density, kg/m")
    tether_area: float = Field(default=1.1e-4, ge=0, description="Tether cross-section, m^2")
    L_max: float = Field(default=13.0, gt=0, description="Maximum tether length, m")
    r_w: float = Field(default=0.05, gt=0, description="Winch effective radius, m")
    beta_w: float = Field(default=0.01, ge=0, description="Winch viscous friction, N·m·s/rad")
    I_w: float = Field(default=0.002, gt=0, description="Winch inertia, kg·m^2")
    K_t: float = Field(default=1000.0, ge=0, description="Tether stiffness, N/m")


class AxisGains(BaseModel):
    """Two-step backstepping pair for one channel."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    k1: float = Field(default=2.0, gt=0)
    k2: float = Field(default=2.0, gt=0)

    @property
    def stiffness(self) -> float:
        """Coefficient on the error in the closed-loop second-order law."""
        return 1.0 + self.k1 * self.k2

    @property
    def damping(self) -> float:
        """Coefficient on the error rate in the closed-loop second-order law."""
        return self.k1 + self.k2


class GainSet(BaseModel):
    """
    Gains for every nominal controller.

    Altitude and yaw use k1 = k2 = 2. The cascade separates its loops by
    bandwidth: the lateral pair is slowed to (1, 1) so the tilt it commands
    stays small, while roll, pitch and winch run at (4, 4) so the inner loops
    settle well before the outer ones move. Every pair can be set per axis.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    # altitude
    k1: float = Field(default=2.0, gt=0)
    k2: float = Field(default=2.0, gt=0)
    x: AxisGains = Field(default_factory=lambda: AxisGains(k1=1.0, k2=1.0))
    y: AxisGains = Field(default_factory=lambda: AxisGains(k1=1.0, k2=1.0))
    phi: AxisGains = Field(default_factory=lambda: AxisGains(k1=4.0, k2=4.0))
    theta: AxisGains = Field(default_factory=lambda: AxisGains(k1=4.0, k2=4.0))
    psi: AxisGains = Field(default_factory=AxisGains)
    winch: AxisGains = Field(default_factory=lambda: AxisGains(k1=4.0, k2=4.0))
    # point-mass PD
    kp: float = Field(default=4.0, gt=0)
    kd: float = Field(default=4.0, gt=0)

    @model_validator(mode="before")
    @classmethod
    def _fill_partial_axes(cls, data: Any) -> Any:
        """A partially given axis keeps that axis' defaults for the missing gain."""
        if not isinstance(data, dict):
            return data
        filled = dict(data)
        for name, field in cls.model_fields.items():
            value = filled.get(name)
            if isinstance(value, dict) and field.default_factory is not None:
                filled[name] = {**field.default_factory().model_dump(), **value}
        return filled

    @property
    def altitude(self) -> AxisGains:
        return AxisGains(k1=self.k1, k2=self.k2)


class CbfSpec(BaseModel):
    """Barrier h = L_max - ||xi|| with a linear class-K slope."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, populate_by_name=True)

    l_max: float = Field(default=13.0, gt=0, description="Maximum tether length, m")
    gamma: float = Field(default=1.0, gt=0, description="Class-K slope, 1/s")
    lambda_: float = Field(default=1.0, gt=0, alias="lambda", description="HOCBF pole, 1/s")
    epsilon_origin: float = Field(default=0.01, gt=0, description="Gradient guard radius, m")
    mode: CbfMode | None = Field(
        default=None, description="Constraint flavour; None picks the plant's default"
    )

    @model_validator(mode="after")
    def _guard_radius_within_range(self) -> "CbfSpec":
        if self.epsilon_origin > self.l_max / 100.0:
            raise ValueError("epsilon_origin must be <= l_max / 100")
        return self
