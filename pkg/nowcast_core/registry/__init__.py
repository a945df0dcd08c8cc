"""
Plugin registries for nowcast-core.

Modules:
    base: PluginRegistry - name to class mapping with entry-point discovery
    method_registry: MethodRegistry - estimation methods
"""

from nowcast_core.registry.base import PluginInfo, PluginRegistry
from nowcast_core.registry.method_registry import BUILTIN_METHODS, MethodRegistry

__all__ = [
    "PluginInfo",
    "PluginRegistry",
    "MethodRegistry",
    "BUILTIN_METHODS",
]
