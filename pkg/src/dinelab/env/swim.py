"""Simulated adaptive multi-tier web application with discrete adaptation actions.

The control loop picks one action per decision interval; the environment
advances the workload, re-solves the queueing model and returns the weighted
three-channel reward vector. The task is continuing: ``terminal`` is always
False.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .queueing import QueueModel, simulate_interval
from .rewards import RewardParams, compose_reward, reward_costs, reward_revenue, reward_user_satisfaction
from .workload import WorkloadConfig, WorkloadGenerator

DIMMER_LEVELS = 10  # dimmer moves on the 0.0, 0.1, ..., 1.0 grid


class Action(IntEnum):
    ADD_SERVER = 0
    REMOVE_SERVER = 1
    INCREASE_DIMMER = 2
    DECREASE_DIMMER = 3
    NO_ADAPTATION = 4


ACTION_NAMES = ("AddServer", "RemoveServer", "IncreaseDimmer", "DecreaseDimmer", "NoAdaptation")
STATE_VAR_NAMES = ("arrival_rate", "avg_latency", "throughput", "servers", "dimmer")


@dataclass(frozen=True)
class EnvState:
    arrival_rate: float
    avg_latency: float
    throughput: float
    servers: int
    dimmer: float
    booting: int


@dataclass
class SimConfig:
    reward: RewardParams = field(default_factory=RewardParams)
    queue: QueueModel = field(default_factory=QueueModel)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    s_min: int = 1
    s_max: int = 12
    initial_servers: int = 4
    initial_dimmer: float = 0.5
    arrival_max: float = 100.0  # observation scaling bound

    def __post_init__(self) -> None:
        if self.s_min < 1:
            raise ValueError(f"s_min must be >= 1, got {self.s_min}")
        if self.s_max < self.s_min:
            raise ValueError(f"s_max ({self.s_max}) must be >= s_min ({self.s_min})")
        if not self.s_min <= self.initial_servers <= self.s_max:
            raise ValueError(
                f"initial_servers {self.initial_servers} outside [{self.s_min}, {self.s_max}]"
            )
        level = round(self.initial_dimmer * DIMMER_LEVELS)
        if not 0 <= level <= DIMMER_LEVELS or abs(level / DIMMER_LEVELS - self.initial_dimmer) > 1e-9:
            raise ValueError(f"initial_dimmer must sit on the 0.1 grid, got {self.initial_dimmer}")
        if self.arrival_max <= 0:
            raise ValueError(f"arrival_max must be positive, got {self.arrival_max}")


class SwimEnv:
    """Gym-style step interface with a vector reward."""

    n_actions = len(Action)
    n_channels = 3
    observation_dim = len(STATE_VAR_NAMES)

    def __init__(self, config: SimConfig):
        self.config = config
        self.workload = WorkloadGenerator(config.workload)
        self.reset()

    def reset(self) -> EnvState:
        c = self.config
        self.workload.reset()
        self._servers = c.initial_servers
        self._dimmer_level = round(c.initial_dimmer * DIMMER_LEVELS)
        self._boot_queue: list[int] = []
        arrival = self.workload.next()
        latency, throughput = simulate_interval(self._servers, self.dimmer, arrival, c.queue)
        self.state = EnvState(arrival, latency, throughput, self._servers, self.dimmer,
                              len(self._boot_queue))
        return self.state

    @property
    def dimmer(self) -> float:
        return self._dimmer_level / DIMMER_LEVELS

    def _process_boots(self) -> None:
        self._boot_queue = [cd - 1 for cd in self._boot_queue]
        done = sum(1 for cd in self._boot_queue if cd <= 0)
        if done:
            self._servers += done
            self._boot_queue = [cd for cd in self._boot_queue if cd > 0]

    def _apply(self, action: Action) -> None:
        c = self.config
        if action == Action.ADD_SERVER:
            if self._servers + len(self._boot_queue) < c.s_max:
                if c.queue.boot_delay == 0:
                    self._servers += 1
                else:
                    self._boot_queue.append(c.queue.boot_delay)
        elif action == Action.REMOVE_SERVER:
            if self._servers > c.s_min:
                self._servers -= 1
        elif action == Action.INCREASE_DIMMER:
            self._dimmer_level = min(DIMMER_LEVELS, self._dimmer_level + 1)
        elif action == Action.DECREASE_DIMMER:
            self._dimmer_level = max(0, self._dimmer_level - 1)

    def step(self, action: int) -> tuple[EnvState, np.ndarray, bool]:
        action = Action(action)
        self._process_boots()
        self._apply(action)
        c = self.config
        arrival = self.workload.next()
        latency, throughput = simulate_interval(self._servers, self.dimmer, arrival, c.queue)
        u = reward_user_satisfaction(latency)
        r = reward_revenue(c.reward.tau, arrival, self.dimmer,
                           c.reward.revenue_optional, c.reward.revenue_mandatory)
        k = reward_costs(c.reward.tau, c.reward.server_cost, self._servers)
        reward = compose_reward((u, r, k), action != Action.NO_ADAPTATION, c.reward)
        self.state = EnvState(arrival, latency, throughput, self._servers, self.dimmer,
                              len(self._boot_queue))
        return self.state, reward, False

    def observe(self, state: EnvState | None = None) -> np.ndarray:
        """Min-max scaled observation vector in [0, 1]^5."""
        s = state if state is not None else self.state
        c = self.config
        span = max(1, c.s_max - c.s_min)
        raw = np.array([
            s.arrival_rate / c.arrival_max,
            s.avg_latency / c.queue.saturation_latency,
            s.throughput / c.arrival_max,
            (s.servers - c.s_min) / span,
            s.dimmer,
        ])
        return np.clip(raw, 0.0, 1.0)

    def raw_state_vector(self, state: EnvState | None = None) -> np.ndarray:
        s = state if state is not None else self.state
        return np.array([s.arrival_rate, s.avg_latency, s.throughput,
                         float(s.servers), s.dimmer])
