"""Tests for the method registry."""

from typing import Any, Dict, Optional

import pytest

from nowcast_core.base.methods import AdaptiveMethod, ElasticNetMethod, LassoMethod
from nowcast_core.interfaces.method import EstimationMethod
from nowcast_core.models.config import BaselineConfig
from nowcast_core.models.results import EstimationTrace
from nowcast_core.models.timeseries import Dataset
from nowcast_core.registry.base import PluginInfo
from nowcast_core.registry.method_registry import MethodRegistry
from nowcast_core.utils.exceptions import RegistryError


class MeanMethod(EstimationMethod):
    """Predicts nothing; only used for registration."""

    name = "mean"

    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        return EstimationTrace(method=self.name, series=series)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name}


class HalfMethod(EstimationMethod):
    """Abstract: describe is missing."""

    def run(self, ds: Dataset, series: Optional[str] = None) -> EstimationTrace:
        return EstimationTrace()


class TestMethodRegistry:
    """Tests for MethodRegistry."""

    def test_builtins(self):
        """Test the built-in methods are registered."""
        registry = MethodRegistry()
        assert registry.list_plugins() == ["atse", "lasso", "enet"]
        assert registry.get("enet").plugin_class is ElasticNetMethod
        assert registry.get("lasso").metadata == {"builtin": True}

    def test_without_builtins(self):
        """Test an empty registry."""
        assert MethodRegistry(builtins=False).list_plugins() == []

    def test_create(self):
        """Test instantiation with keyword arguments."""
        registry = MethodRegistry()
        method = registry.create("enet", config=BaselineConfig(n_lags=3))
        assert isinstance(method, ElasticNetMethod)
        assert method.config.kind == "enet"
        assert isinstance(registry.create("atse"), AdaptiveMethod)

    def test_register_plugin(self):
        """Test registering a concrete method."""
        registry = MethodRegistry()
        assert registry.register("mean", MeanMethod)
        assert registry.has_plugin("mean")
        assert isinstance(registry.create("mean"), MeanMethod)

    def test_duplicate_keeps_first(self):
        """Test a second registration under the same name is refused."""
        registry = MethodRegistry()
        assert not registry.register("lasso", MeanMethod)
        assert registry.get("lasso").plugin_class is LassoMethod

    @pytest.mark.parametrize("plugin", [HalfMethod, dict, "lasso"])
    def test_invalid_plugin(self, plugin):
        """Test abstract classes and non-methods raise RegistryError."""
        with pytest.raises(RegistryError):
            MethodRegistry().register("bad", plugin)

    def test_unknown_name(self):
        """Test creating an unknown method raises RegistryError."""
        with pytest.raises(RegistryError) as exc_info:
            MethodRegistry().create("nope")
        assert exc_info.value.details["available"] == ["atse", "lasso", "enet"]

    def test_constructor_failure(self):
        """Test constructor errors are wrapped."""
        with pytest.raises(RegistryError):
            MethodRegistry().create("lasso", unknown=1)

    def test_unregister(self):
        """Test removing a method."""
        registry = MethodRegistry()
        registry.unregister("enet")
        assert not registry.has_plugin("enet")
        with pytest.raises(RegistryError):
            registry.unregister("enet")

    def test_discovery_without_plugins(self):
        """Test discovery with no installed plugins keeps the built-ins."""
        registry = MethodRegistry(discover=True)
        assert {"atse", "lasso", "enet"} <= set(registry.list_plugins())

    def test_plugin_info_needs_name(self):
        """Test an empty plugin name raises RegistryError."""
        with pytest.raises(RegistryError):
            PluginInfo(name="", plugin_class=MeanMethod)
