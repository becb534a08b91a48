"""Reference trajectory handles: setpoint, linear ramp and circle."""

import math
from abc import ABC, abstractmethod

import numpy as np

from app.models import ScenarioConfig, ScenarioKind, Setpoint


class ReferenceTrajectory(ABC):
    """Immutable time -> Setpoint map."""

    def __init__(self, yaw: float, tether_length: float):
        self._yaw = yaw
        self._tether_length = tether_length

    @abstractmethod
    def kinematics(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Desired position, velocity and acceleration at ``t``."""

    def at(self, t: float) -> Setpoint:
        pos, vel, acc = self.kinematics(t)
        return Setpoint(
            position=tuple(pos.tolist()),
            velocity=tuple(vel.tolist()),
            acceleration=tuple(acc.tolist()),
            yaw=self._yaw,
            tether_length=self._tether_length,
        )


class StaticReference(ReferenceTrajectory):
    """Fixed target."""

    def __init__(self, target, yaw: float, tether_length: float):
        super().__init__(yaw, tether_length)
        self._target = np.asarray(target, dtype=float)

    def kinematics(self, t: float):
        zero = np.zeros(3)
        return self._target.copy(), zero, zero.copy()


class LinearReference(ReferenceTrajectory):
    """Constant-speed ramp from ``start`` to ``target``, then hold."""

    def __init__(self, start, target, speed: float, yaw: float, tether_length: float):
        super().__init__(yaw, tether_length)
        self._start = np.asarray(start, dtype=float)
        delta = np.asarray(target, dtype=float) - self._start
        self._length = float(np.linalg.norm(delta))
        self._direction = delta / self._length if self._length > 0.0 else np.zeros(3)
        self._speed = speed

    def kinematics(self, t: float):
        travelled = min(self._speed * t, self._length)
        pos = self._start + travelled * self._direction
        moving = self._speed * t < self._length
        vel = self._speed * self._direction if moving else np.zeros(3)
        return pos, vel, np.zeros(3)


class CircularReference(ReferenceTrajectory):
    """Horizontal circle center + radius*(cos wt, sin wt, 0)."""

    def __init__(self, center, radius: float, omega: float, yaw: float, tether_length: float):
        super().__init__(yaw, tether_length)
        self._center = np.asarray(center, dtype=float)
        self._radius = radius
        self._omega = omega

    def kinematics(self, t: float):
        phase = self._omega * t
        c, s = math.cos(phase), math.sin(phase)
        rad, om = self._radius, self._omega
        pos = self._center + rad * np.array([c, s, 0.0])
        vel = rad * om * np.array([-s, c, 0.0])
        acc = -rad * om * om * np.array([c, s, 0.0])
        return pos, vel, acc


def build_reference(config: ScenarioConfig) -> ReferenceTrajectory:
    """Reference handle for a scenario."""
    tether_length = config.desired_tether_length
    if config.scenario is ScenarioKind.SETPOINT:
        return StaticReference(config.target, config.yaw, tether_length)
    if config.scenario is ScenarioKind.LINEAR_TRACK:
        return LinearReference(config.start, config.target, config.speed, config.yaw, tether_length)
    return CircularReference(config.center, config.radius, config.omega, config.yaw, tether_length)
