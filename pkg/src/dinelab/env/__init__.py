from .gridworld import GRID_ACTION_NAMES, GRID_CHANNEL_NAMES, CliffWalk
from .queueing import QueueModel, erlang_c, simulate_interval, steady_state_latency_grid
from .rewards import (
    CHANNEL_NAMES,
    N_CHANNELS,
    RewardParams,
    compose_reward,
    reward_costs,
    reward_revenue,
    reward_user_satisfaction,
)
from .swim import ACTION_NAMES, DIMMER_LEVELS, STATE_VAR_NAMES, Action, EnvState, SimConfig, SwimEnv
from .workload import PATTERNS, WorkloadConfig, WorkloadGenerator

__all__ = [
    "ACTION_NAMES",
    "Action",
    "CHANNEL_NAMES",
    "CliffWalk",
    "DIMMER_LEVELS",
    "EnvState",
    "GRID_ACTION_NAMES",
    "GRID_CHANNEL_NAMES",
    "N_CHANNELS",
    "PATTERNS",
    "QueueModel",
    "RewardParams",
    "STATE_VAR_NAMES",
    "SimConfig",
    "SwimEnv",
    "WorkloadConfig",
    "WorkloadGenerator",
    "compose_reward",
    "erlang_c",
    "reward_costs",
    "reward_revenue",
    "reward_user_satisfaction",
    "simulate_interval",
    "steady_state_latency_grid",
]
