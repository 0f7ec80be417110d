"""Typed pipeline configuration with strict JSON loading.

A single JSON document configures every stage; command-line flags override
individual fields. Unknown keys are rejected with their full dotted path so
typos fail loudly instead of silently using defaults.
"""

from __future__ import annotations

import dataclasses
import json
import types
import typing
from dataclasses import dataclass, field
from pathlib import Path

from .augment import AugmentParams
from .compose import ComposePolicy, MixPolicy
from .errors import ConfigError
from .evaluation import SweepConfig
from .generator import GenerationConfig
from .stroke_model import FitConfig


@dataclass
class PipelineConfig:
    """Resolved settings for every pipeline stage."""

    scenario: int = 1
    library_k: int = 6
    pool_size: int = 20
    fit: FitConfig = field(default_factory=FitConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    augment: AugmentParams = field(default_factory=AugmentParams)
    compose: ComposePolicy = field(default_factory=ComposePolicy)
    mix: MixPolicy = field(default_factory=lambda: MixPolicy("homl", 0.5))
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def __post_init__(self):
        if self.scenario < 1:
            raise ConfigError(f"scenario must be >= 1, got {self.scenario}")
        if self.library_k < 1:
            raise ConfigError(f"library_k must be >= 1, got {self.library_k}")
        if self.pool_size < 1:
            raise ConfigError(f"pool_size must be >= 1, got {self.pool_size}")


def _tupled(value):
    if isinstance(value, list):
        return tuple(_tupled(v) for v in value)
    return value


def _coerce(tp, raw, where: str):
    origin = typing.get_origin(tp)
    if dataclasses.is_dataclass(tp):
        return _build(tp, raw, where)
    if origin in (typing.Union, types.UnionType):
        if raw is None:
            return None
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        if len(args) == 1:
            return _coerce(args[0], raw, where)
        return _tupled(raw)
    return _tupled(raw)


def _build(cls, data, path: str):
    where = path or "top level"
    if not isinstance(data, dict):
        raise ConfigError(f"expected an object at {where}, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, raw in data.items():
        dotted = f"{path}.{key}" if path else key
        if key not in names:
            raise ConfigError(f"unknown config field: {dotted}")
        kwargs[key] = _coerce(hints[key], raw, dotted)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config at {where}: {exc}") from exc


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a PipelineConfig from parsed JSON, rejecting unknown fields."""
    return _build(PipelineConfig, data, "")


def dataclass_from_dict(cls, data: dict, path: str = ""):
    """Strictly build any config dataclass from parsed JSON."""
    return _build(cls, data, path)


def load_config(path: str | Path) -> PipelineConfig:
    """Load and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def config_to_jsonable(cfg) -> dict:
    """Dataclass tree to plain JSON types (tuples become lists)."""
    return json.loads(json.dumps(dataclasses.asdict(cfg)))
