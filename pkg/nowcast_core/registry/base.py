"""
Base registry implementation for plugins.

Maps names to plugin classes registered in code or discovered through a
package entry-point group.
"""

import importlib.metadata
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Type

from nowcast_core.utils.exceptions import RegistryError
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class PluginInfo:
    """
    Information about a registered plugin.

    Attributes:
        name: Plugin name
        plugin_class: Plugin class
        entry_point: Entry point name (if discovered)
        metadata: Additional metadata
    """

    name: str
    plugin_class: Type
    entry_point: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name:
            raise RegistryError("Plugin name cannot be empty")


class PluginRegistry(ABC):
    """
    Base class for plugin registries.

    Subclasses name their entry-point group and decide which classes are
    acceptable.

    Example:
        >>> class MyRegistry(PluginRegistry):
        ...     def get_entry_point_group(self):
        ...         return "my_app.plugins"
        ...
        ...     def validate_plugin(self, plugin_class):
        ...         return issubclass(plugin_class, MyPluginBase)
    """

    def __init__(self) -> None:
        self._plugins: Dict[str, PluginInfo] = {}
        logger.debug("registry_initialized", registry=self.__class__.__name__)

    @abstractmethod
    def get_entry_point_group(self) -> str:
        """Entry point group scanned by :meth:`discover_plugins`."""
        pass

    @abstractmethod
    def validate_plugin(self, plugin_class: Type) -> bool:
        """Whether ``plugin_class`` may be registered."""
        pass

    def discover_plugins(self) -> List[str]:
        """
        Register every plugin found in the entry-point group.

        Broken entry points are logged and skipped.

        Returns:
            Names registered by this call
        """
        group = self.get_entry_point_group()
        found: List[str] = []
        for entry_point in importlib.metadata.entry_points().select(group=group):
            try:
                plugin_class = entry_point.load()
                if self.register(entry_point.name, plugin_class, entry_point=entry_point.value):
                    found.append(entry_point.name)
            except Exception as e:
                logger.error(
                    "plugin_discovery_failed",
                    entry_point=entry_point.name,
                    group=group,
                    error=str(e),
                )
        logger.debug("plugins_discovered", group=group, names=found)
        return found

    def register(
        self,
        name: str,
        plugin_class: Type,
        entry_point: Optional[str] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> bool:
        """
        Register a plugin.

        Returns:
            False when ``name`` was already registered (the first wins)

        Raises:
            RegistryError: If the class is not a valid plugin
        """
        if not self.validate_plugin(plugin_class):
            raise RegistryError(
                f"Invalid plugin class: {plugin_class}",
                details={"name": name, "class": str(plugin_class)},
            )
        if name in self._plugins:
            logger.warning("plugin_already_registered", name=name)
            return False
        self._plugins[name] = PluginInfo(
            name=name,
            plugin_class=plugin_class,
            entry_point=entry_point,
            metadata=metadata or {},
        )
        logger.debug("plugin_registered", name=name)
        return True

    def unregister(self, name: str) -> None:
        """
        Unregister a plugin.

        Raises:
            RegistryError: If plugin not found
        """
        if name not in self._plugins:
            raise RegistryError(f"Plugin not found: {name}", details={"name": name})
        del self._plugins[name]

    def get(self, name: str) -> Optional[PluginInfo]:
        return self._plugins.get(name)

    def create(self, name: str, **kwargs: Any) -> Any:
        """
        Instantiate a registered plugin.

        Raises:
            RegistryError: If the plugin is unknown or its constructor fails
        """
        if name not in self._plugins:
            raise RegistryError(
                f"Plugin not found: {name}",
                details={"name": name, "available": self.list_plugins()},
            )
        info = self._plugins[name]
        try:
            return info.plugin_class(**kwargs)
        except Exception as e:
            raise RegistryError(
                f"Failed to instantiate plugin: {name}",
                details={"name": name, "error": str(e)},
                cause=e,
            )

    def list_plugins(self) -> List[str]:
        return list(self._plugins.keys())

    def has_plugin(self, name: str) -> bool:
        return name in self._plugins
