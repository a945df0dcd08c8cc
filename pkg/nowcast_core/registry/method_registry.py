"""
Method Registry.

Manages estimation methods by name: the built-in ``atse``, ``lasso`` and
``enet`` plus anything published under the ``nowcast.methods`` entry point
group.
"""

from typing import Type

from nowcast_core.base.methods import AdaptiveMethod, ElasticNetMethod, LassoMethod
from nowcast_core.interfaces.method import EstimationMethod
from nowcast_core.registry.base import PluginRegistry
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

BUILTIN_METHODS = {
    AdaptiveMethod.name: AdaptiveMethod,
    LassoMethod.name: LassoMethod,
    ElasticNetMethod.name: ElasticNetMethod,
}


class MethodRegistry(PluginRegistry):
    """
    Registry for estimation methods.

    Example Entry Point (pyproject.toml):
        >>> [project.entry-points."nowcast.methods"]
        ... last_value = "my_package.methods:LastValueMethod"

    Usage:
        >>> registry = MethodRegistry()
        >>> method = registry.create("lasso")
    """

    def __init__(self, builtins: bool = True, discover: bool = False) -> None:
        super().__init__()
        if builtins:
            for name, cls in BUILTIN_METHODS.items():
                self.register(name, cls, metadata={"builtin": True})
        if discover:
            self.discover_plugins()

    def get_entry_point_group(self) -> str:
        return "nowcast.methods"

    def validate_plugin(self, plugin_class: Type) -> bool:
        """Accept concrete subclasses of :class:`EstimationMethod`."""
        if not isinstance(plugin_class, type) or not issubclass(plugin_class, EstimationMethod):
            logger.warning("method_not_estimation_method", plugin=str(plugin_class))
            return False
        return not getattr(plugin_class, "__abstractmethods__", None)
