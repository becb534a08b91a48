"""Plant adapters for the closed-loop simulator."""

from app.adapters.base import BasePlantAdapter
from app.adapters.point_mass import DoubleIntegratorAdapter, SingleIntegratorAdapter
from app.adapters.registry import PlantAdapterRegistry
from app.adapters.tuav import FullTuavAdapter

__all__ = [
    "BasePlantAdapter",
    "SingleIntegratorAdapter",
    "DoubleIntegratorAdapter",
    "FullTuavAdapter",
    "PlantAdapterRegistry",
]
