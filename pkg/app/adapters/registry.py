from app.adapters.base import BasePlantAdapter
from app.adapters.point_mass import DoubleIntegratorAdapter, SingleIntegratorAdapter
from app.adapters.tuav import FullTuavAdapter
from app.core.exceptions import ConfigError
from app.models import ModelKind, ScenarioConfig


class PlantAdapterRegistry:
    """Registry for plant adapters."""

    _adapters: dict[ModelKind, type[BasePlantAdapter]] = {}

    @classmethod
    def register(cls, kind: ModelKind, adapter_class: type[BasePlantAdapter]) -> None:
        """Register a plant adapter class for a model kind."""
        cls._adapters[kind] = adapter_class

    @classmethod
    def get_adapter(cls, config: ScenarioConfig) -> BasePlantAdapter:
        """Fresh adapter instance for one episode."""
        adapter_class = cls._adapters.get(config.model)
        if adapter_class is None:
            raise ConfigError("model", f"{config.model.value} has no registered plant adapter")
        return adapter_class(config)


PlantAdapterRegistry.register(ModelKind.SINGLE_INTEGRATOR, SingleIntegratorAdapter)
PlantAdapterRegistry.register(ModelKind.DOUBLE_INTEGRATOR, DoubleIntegratorAdapter)
PlantAdapterRegistry.register(ModelKind.FULL_TUAV, FullTuavAdapter)
