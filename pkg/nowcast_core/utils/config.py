"""
Configuration utilities for nowcast-core.

Loads and saves estimator, baseline, scenario and comparison documents, and
resolves process settings from ``.env`` files and ``NOWCAST_*`` variables.

Three document formats are accepted, chosen by file suffix:

- YAML (``.yaml``, ``.yml``)
- JSON (``.json``)
- flat ``key = value`` text (``.cfg``, ``.conf``, ``.txt``), ``#`` comments

Keys are the model field names; dotted keys address nested models
(``tree_params.max_depth = 4``) and ``lo:hi`` values parse to pairs
(``window_interval = 1:46``). Unknown keys are errors.
"""

import json
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, TypeAdapter, ValidationError

from nowcast_core.models.config import (
    BaselineConfig,
    CompareSpec,
    EstimatorConfig,
    NowcastSettings,
    SearchIntervals,
)
from nowcast_core.models.scenario import Scenario
from nowcast_core.utils.atomic import atomic_write_text
from nowcast_core.utils.exceptions import ConfigError

M = TypeVar("M", bound=BaseModel)
PathLike = Union[str, Path]

_REFERENCES = TypeAdapter(Dict[str, Dict[str, float]])

YAML_SUFFIXES = (".yaml", ".yml")
JSON_SUFFIXES = (".json",)
TEXT_SUFFIXES = (".cfg", ".conf", ".txt")

_PAIR = re.compile(r"^\s*(-?\d+(?:\.\d*)?)\s*:\s*(-?\d+(?:\.\d*)?)\s*$")

ENV_OVERRIDES = {
    "NOWCAST_LOG_LEVEL": "log_level",
    "NOWCAST_LOG_FORMAT": "log_format",
    "NOWCAST_SEED": "seed",
    "NOWCAST_WARMUP": "warmup",
    "NOWCAST_N_JOBS": "n_jobs",
}


def _number(text: str) -> Union[int, float]:
    return float(text) if "." in text else int(text)


def parse_value(raw: str) -> Any:
    """
    Parse one text value: ``lo:hi`` pairs, then YAML scalars and flow lists.

    Example:
        >>> parse_value("1:46"), parse_value("0.05"), parse_value("none")
        ((1, 46), 0.05, None)
    """
    match = _PAIR.match(raw)
    if match:
        return (_number(match.group(1)), _number(match.group(2)))
    if raw.strip().lower() == "none":
        return None
    return yaml.safe_load(raw)


def parse_key_values(text: str) -> Dict[str, Any]:
    """
    Parse a flat ``key = value`` document.

    Raises:
        ConfigError: On a line without ``=`` or a repeated key
    """
    result: Dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", details={"line": number, "text": line})
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise ConfigError("empty key", details={"line": number})
        if key in result:
            raise ConfigError("repeated key", details={"line": number, "key": key})
        try:
            result[key] = parse_value(raw)
        except yaml.YAMLError as e:
            raise ConfigError(
                "unparseable value", details={"line": number, "key": key}, cause=e
            )
    return result


def unflatten(flat: Dict[str, Any]) -> Dict[str, Any]:
    """
    Expand dotted keys into nested dictionaries.

    Example:
        >>> unflatten({"tree_params.max_depth": 4, "eta": 0.1})
        {'tree_params': {'max_depth': 4}, 'eta': 0.1}
    """
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError("key is both a value and a section", details={"key": key})
            node = child
        if isinstance(node.get(parts[-1]), dict):
            raise ConfigError("key is both a value and a section", details={"key": key})
        node[parts[-1]] = value
    return nested


def flatten(nested: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Inverse of :func:`unflatten`."""
    flat: Dict[str, Any] = {}
    for key, value in nested.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, prefix=f"{name}."))
        else:
            flat[name] = value
    return flat


def _coerce_pairs(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _coerce_pairs(v) for k, v in value.items()}
    if isinstance(value, str):
        match = _PAIR.match(value)
        if match:
            return (_number(match.group(1)), _number(match.group(2)))
    return value


def read_document(path: PathLike) -> Dict[str, Any]:
    """
    Read a configuration document into a nested dictionary.

    Raises:
        ConfigError: If the file is missing, unreadable or has an unknown format
    """
    path_obj = Path(path)
    if not path_obj.exists():
        raise ConfigError(f"Configuration file not found: {path}", details={"path": str(path)})
    suffix = path_obj.suffix.lower()
    try:
        text = path_obj.read_text(encoding="utf-8")
        if suffix in YAML_SUFFIXES:
            data = yaml.safe_load(text) or {}
        elif suffix in JSON_SUFFIXES:
            data = json.loads(text)
        elif suffix in TEXT_SUFFIXES:
            data = parse_key_values(text)
        else:
            raise ConfigError(
                f"Unsupported config file format: {path}",
                details={"suffix": suffix},
            )
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(f"Failed to load configuration from {path}", cause=e)
    if not isinstance(data, dict):
        raise ConfigError("configuration document must be a mapping", details={"path": str(path)})
    return _coerce_pairs(unflatten(flatten(data)))


def build_model(model: Type[M], data: Dict[str, Any], source: str = "configuration") -> M:
    """
    Validate ``data`` into ``model``.

    Raises:
        ConfigError: Naming every invalid or unknown key
    """
    try:
        return model(**data)
    except ValidationError as e:
        problems = [
            {"key": ".".join(str(p) for p in err["loc"]), "error": err["msg"]}
            for err in e.errors(include_url=False)
        ]
        raise ConfigError(f"Invalid {source}", details={"problems": problems}, cause=e)
    except TypeError as e:
        raise ConfigError(f"Invalid {source}", cause=e)


def load_model(model: Type[M], path: PathLike) -> M:
    """Read and validate a document of any supported format."""
    return build_model(model, read_document(path), source=f"{model.__name__} in {path}")


def load_estimator_config(path: PathLike) -> EstimatorConfig:
    """
    Load an estimator configuration.

    Raises:
        ConfigError: If the file cannot be read or holds invalid/unknown keys

    Example:
        >>> cfg = load_estimator_config("atse.cfg")
        >>> cfg.window_interval
        (1, 46)
    """
    return load_model(EstimatorConfig, path)


def load_baseline_config(path: PathLike) -> BaselineConfig:
    """Load a baseline configuration (``hyper.lam``, ``hyper.alpha`` for fixed penalties)."""
    return load_model(BaselineConfig, path)


def load_search_intervals(path: PathLike) -> SearchIntervals:
    return load_model(SearchIntervals, path)


def load_scenario(path: PathLike) -> Scenario:
    return load_model(Scenario, path)


def load_references(path: PathLike) -> Dict[str, Dict[str, float]]:
    """
    Load reference scores: a mapping of series to ``{label: rmse}``.

    Example:
        >>> load_references("bounds.yaml")
        {'drop': {'UBW': 11.2}}
    """
    data = read_document(path)
    try:
        return _REFERENCES.validate_python(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid references in {path}", cause=e)


def load_compare_spec(path: PathLike) -> CompareSpec:
    """Load a comparison document (YAML or JSON; nested lists are required)."""
    path_obj = Path(path)
    if path_obj.suffix.lower() not in YAML_SUFFIXES + JSON_SUFFIXES:
        raise ConfigError(
            "comparison documents must be YAML or JSON", details={"path": str(path)}
        )
    try:
        text = path_obj.read_text(encoding="utf-8")
        is_yaml = path_obj.suffix.lower() in YAML_SUFFIXES
        data = yaml.safe_load(text) if is_yaml else json.loads(text)
    except FileNotFoundError as e:
        raise ConfigError(f"Configuration file not found: {path}", cause=e)
    except Exception as e:
        raise ConfigError(f"Failed to load configuration from {path}", cause=e)
    if not isinstance(data, dict):
        raise ConfigError("comparison document must be a mapping", details={"path": str(path)})
    return build_model(CompareSpec, data, source=f"comparison spec {path}")


def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)) and len(value) == 2 and not isinstance(value[0], list):
        return f"{value[0]}:{value[1]}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return json.dumps(list(value))
    return str(value)


def dump_model(model: BaseModel, fmt: str = "text") -> str:
    """
    Serialize a configuration model; inverse of the loaders.

    Raises:
        ConfigError: If ``fmt`` is not ``text``, ``yaml`` or ``json``
    """
    data = model.model_dump(mode="json")
    if fmt == "text":
        lines = [f"{key} = {_format_value(value)}" for key, value in flatten(data).items()]
        return "\n".join(lines) + "\n"
    if fmt == "yaml":
        return str(yaml.safe_dump(data, default_flow_style=None, sort_keys=False))
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    raise ConfigError(f"Unsupported format: {fmt}")


def format_for_path(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in YAML_SUFFIXES:
        return "yaml"
    if suffix in JSON_SUFFIXES:
        return "json"
    return "text"


def save_estimator_config(cfg: EstimatorConfig, path: PathLike) -> Path:
    """
    Write ``cfg`` atomically in the format implied by the suffix.

    Example:
        >>> save_estimator_config(best, "best.cfg")
        PosixPath('best.cfg')
    """
    path_obj = Path(path)
    return atomic_write_text(path_obj, dump_model(cfg, format_for_path(path_obj)))


def merge_configs(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge two configuration dictionaries; override values win.

    Example:
        >>> merge_configs({"tree_params": {"max_depth": 3}}, {"tree_params": {"max_depth": 5}})
        {'tree_params': {'max_depth': 5}}
    """
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = value
    return result


def _apply_env_overrides(settings: Dict[str, Any]) -> Dict[str, Any]:
    for variable, field_name in ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if value:
            settings[field_name] = value
    return settings


def load_settings(
    env_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> NowcastSettings:
    """
    Resolve process settings: defaults, then ``.env``/environment, then ``overrides``.

    ``None`` values in ``overrides`` are ignored so unset CLI flags fall through.

    Raises:
        ConfigError: If a value is invalid
    """
    if env_file:
        load_dotenv(env_file)
    else:
        load_dotenv()
    settings = _apply_env_overrides({})
    settings.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_model(NowcastSettings, settings, source="settings")
