"""YAML run configuration: every section maps 1:1 onto a dataclass.

Unknown keys are rejected with their full path so typos in config files
fail loudly instead of silently falling back to defaults.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

import yaml

from .agent.core import Hyperparameters
from .dines.envmodel import EnvModelConfig
from .dines.types import Thresholds
from .env.queueing import QueueModel
from .env.rewards import RewardParams
from .env.swim import SimConfig
from .env.workload import WorkloadConfig

ENVIRONMENTS = ("swim", "gridworld")


class ConfigError(ValueError):
    pass


@dataclass
class GridConfig:
    height: int = 4
    width: int = 12
    max_episode_steps: int = 200

    def __post_init__(self) -> None:
        if self.max_episode_steps <= 0:
            raise ValueError(f"max_episode_steps must be positive, got {self.max_episode_steps}")


@dataclass
class SimShape:
    """Scalar SimConfig fields; reward/queue/workload live in their own sections."""
    s_min: int = 1
    s_max: int = 12
    initial_servers: int = 4
    initial_dimmer: float = 0.5
    arrival_max: float = 100.0


@dataclass
class RunSpec:
    environment: str = "swim"
    reward: RewardParams = field(default_factory=RewardParams)
    queue: QueueModel = field(default_factory=QueueModel)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    sim: SimShape = field(default_factory=SimShape)
    gridworld: GridConfig = field(default_factory=GridConfig)
    agent: Hyperparameters = field(default_factory=Hyperparameters)
    dines: Thresholds = field(default_factory=Thresholds)
    env_model: EnvModelConfig = field(default_factory=EnvModelConfig)
    digest: str = ""

    def sim_config(self) -> SimConfig:
        return SimConfig(reward=self.reward, queue=self.queue, workload=self.workload,
                         s_min=self.sim.s_min, s_max=self.sim.s_max,
                         initial_servers=self.sim.initial_servers,
                         initial_dimmer=self.sim.initial_dimmer,
                         arrival_max=self.sim.arrival_max)


_SECTIONS = {
    "reward": RewardParams,
    "queue": QueueModel,
    "workload": WorkloadConfig,
    "sim": SimShape,
    "gridworld": GridConfig,
    "agent": Hyperparameters,
    "dines": Thresholds,
    "env_model": EnvModelConfig,
}

# tuple-valued dataclass fields that YAML provides as lists
_TUPLE_FIELDS = {"hidden_layers", "hidden"}


def _build_section(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(data).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}; known: {sorted(known)}")
    kwargs = {k: tuple(v) if k in _TUPLE_FIELDS and isinstance(v, list) else v
              for k, v in data.items()}
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def parse_run_spec(data: dict | None) -> RunSpec:
    data = dict(data or {})
    environment = data.pop("environment", "swim")
    if environment not in ENVIRONMENTS:
        raise ConfigError(f"environment: must be one of {ENVIRONMENTS}, got {environment!r}")
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s) {sorted(unknown)}; known: {sorted(_SECTIONS)}")
    kwargs: dict[str, Any] = {"environment": environment}
    for name, cls in _SECTIONS.items():
        if name in data:
            kwargs[name] = _build_section(cls, data[name], name)
    spec = RunSpec(**kwargs)
    spec.digest = _digest(spec)
    return spec


def load_run_spec(path: str) -> RunSpec:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return parse_run_spec(data)


def _digest(spec: RunSpec) -> str:
    def plain(obj):
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                    if f.name != "digest"}
        if isinstance(obj, (list, tuple)):
            return [plain(v) for v in obj]
        return obj
    canonical = json.dumps(plain(spec), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
