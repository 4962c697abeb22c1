"""M/M/c latency model for the simulated web application."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class QueueModel:
    service_rate: float = 10.0          # requests/second one server handles at dimmer 0
    dimmer_latency_factor: float = 0.5  # service slowdown per unit of dimmer
    boot_delay: int = 1                 # steps before an added server serves traffic
    saturation_latency: float = 5.0     # latency reported once the queue saturates
    utilization_cap: float = 0.99

    def __post_init__(self) -> None:
        if self.service_rate <= 0:
            raise ValueError(f"service_rate must be positive, got {self.service_rate}")
        if self.dimmer_latency_factor < 0:
            raise ValueError(f"dimmer_latency_factor must be >= 0, got {self.dimmer_latency_factor}")
        if self.boot_delay < 0:
            raise ValueError(f"boot_delay must be >= 0, got {self.boot_delay}")
        if self.saturation_latency <= 0:
            raise ValueError(f"saturation_latency must be positive, got {self.saturation_latency}")
        if not 0.0 < self.utilization_cap <= 1.0:
            raise ValueError(f"utilization_cap must be in (0, 1], got {self.utilization_cap}")


def erlang_c(servers: int, offered_load: float) -> float:
    """Probability an arriving request has to queue in an M/M/c system.

    ``offered_load`` is lambda/mu. Uses the Erlang-B recurrence for numerical
    stability instead of the factorial formula. Requires offered_load < servers.
    """
    if offered_load <= 0.0:
        return 0.0
    b = 1.0
    for k in range(1, servers + 1):
        b = offered_load * b / (k + offered_load * b)
    return servers * b / (servers - offered_load * (1.0 - b))


def simulate_interval(servers: int, dimmer: float, arrival_rate: float,
                      params: QueueModel) -> tuple[float, float]:
    """Steady-state (avg_latency, throughput) for one decision interval.

    Latency is Erlang-C waiting time plus one service time, capped at the
    saturation latency (the cap keeps latency monotone in server count even
    just below the utilization cutoff). Throughput never exceeds either the
    arrival rate or the total service capacity.
    """
    if servers < 1:
        raise ValueError(f"need at least one server, got {servers}")
    mu_eff = params.service_rate / (1.0 + dimmer * params.dimmer_latency_factor)
    capacity = servers * mu_eff
    if arrival_rate <= 0.0:
        return 1.0 / mu_eff, 0.0
    utilization = arrival_rate / capacity
    if utilization >= params.utilization_cap:
        return params.saturation_latency, min(arrival_rate, capacity)
    wait = erlang_c(servers, arrival_rate / mu_eff) / (capacity - arrival_rate)
    latency = min(wait + 1.0 / mu_eff, params.saturation_latency)
    return latency, arrival_rate


def steady_state_latency_grid(s_values, d_values, arrival_rate: float,
                              params: QueueModel) -> np.ndarray:
    """Latency over a (servers, dimmer) grid; used by monotonicity checks."""
    out = np.empty((len(s_values), len(d_values)))
    for i, s in enumerate(s_values):
        for j, d in enumerate(d_values):
            out[i, j] = simulate_interval(int(s), float(d), arrival_rate, params)[0]
    return out
