"""Decomposed reward function of the auto-scaling environment.

Three channels: user satisfaction (latency-driven), revenue (dimmer-driven)
and running costs (server count). Channel weights are applied here, inside
the reward vector, so sub-agent Q-values stay directly comparable; the
aggregated agent then sums them unweighted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_CHANNELS = 3
CHANNEL_NAMES = ("UserSatisfaction", "Revenue", "RunningCosts")


@dataclass
class RewardParams:
    weight_user_satisfaction: float = 4.0
    weight_revenue: float = 2.0
    weight_costs: float = 1.0
    tau: float = 60.0               # seconds per decision interval
    revenue_optional: float = 1.5   # revenue per request served with optional content
    revenue_mandatory: float = 1.0  # revenue per request served without it
    server_cost: float = 0.01       # cost per server per second
    action_penalty: float = -0.1    # total penalty for any state-changing action

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.revenue_optional > self.revenue_mandatory > 0:
            raise ValueError(
                "need revenue_optional > revenue_mandatory > 0, got "
                f"{self.revenue_optional} and {self.revenue_mandatory}"
            )
        if self.server_cost <= 0:
            raise ValueError(f"server_cost must be positive, got {self.server_cost}")

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.weight_user_satisfaction, self.weight_revenue, self.weight_costs)


def reward_user_satisfaction(latency: float) -> float:
    """Piecewise-linear satisfaction of the average latency, in [-inf, 0.5].

    0.5 up to 20 ms, then a linear drop reaching -0.5 at one second, then a
    gentler linear decline.
    """
    if latency < 0:
        raise ValueError(f"latency must be >= 0, got {latency}")
    if latency <= 0.02:
        return 0.5
    if latency >= 1.0:
        return -0.5 - (latency - 1.0) / 20.0
    return 0.5 - (latency - 0.02) / 0.98


def reward_revenue(tau: float, arrival_rate: float, dimmer: float,
                   revenue_optional: float, revenue_mandatory: float) -> float:
    """Revenue over one interval: per-request value interpolated by the dimmer."""
    return tau * arrival_rate * (dimmer * revenue_optional + (1.0 - dimmer) * revenue_mandatory)


def reward_costs(tau: float, server_cost: float, servers: int) -> float:
    """Negative operating cost of the servers in use over one interval."""
    return -(tau * server_cost * servers)


def compose_reward(channel_values: tuple[float, float, float], state_changing: bool,
                   params: RewardParams) -> np.ndarray:
    """Weighted reward vector; a state-changing action spreads the penalty
    equally over the three channels so the vector still sums to the scalar
    total plus the full penalty."""
    u, r, k = channel_values
    penalty = params.action_penalty / N_CHANNELS if state_changing else 0.0
    return np.array([
        params.weight_user_satisfaction * u + penalty,
        params.weight_revenue * r + penalty,
        params.weight_costs * k + penalty,
    ])
