"""Packaged walkthrough scenario for the dashboard.

A long stationary training phase over a mix of load levels, then a short
request-rate peak followed by a sustained higher level once the agent has
converged. At the sustained level the server pool cannot absorb a high
dimmer, so the converged policy trades revenue (dimmer down) and running
costs (servers up) for user satisfaction.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import RunSpec, parse_run_spec

CONVERGENCE_STEP = 22_575   # workload steps up here, after convergence
PEAK_LEVEL = 80.0
PEAK_LEN = 3
SUSTAINED_LEVEL = 66.0      # close to the full-pool capacity at high dimmer (10*6.67=67)
PRE_STEP_LEVEL = 40.0
PRE_STEP_HOLD = 400         # steps at the base level right before the increase
TRAINING_LEVELS = (30.0, 40.0, 52.0, 66.0, 80.0)
DEFAULT_STEPS = 23_000


def level_blocks(total: int, seed: int = 0, levels=TRAINING_LEVELS,
                 block_range: tuple[int, int] = (60, 140)) -> list[float]:
    """Piecewise-constant arrival rates: shuffled level blocks of random length."""
    rng = np.random.default_rng(seed)
    rates: list[float] = []
    while len(rates) < total:
        level = float(rng.choice(levels))
        block = int(rng.integers(*block_range))
        rates.extend([level] * block)
    return rates[:total]


def write_demo_workload(path: str | Path, seed: int = 0, total: int = DEFAULT_STEPS + 100) -> None:
    """One arrival rate per line: shuffled level blocks, hold, peak, sustained high."""
    rates = level_blocks(CONVERGENCE_STEP - PRE_STEP_HOLD, seed=seed)
    rates.extend([PRE_STEP_LEVEL] * PRE_STEP_HOLD)
    rates.extend([PEAK_LEVEL] * PEAK_LEN)
    while len(rates) < total:
        rates.append(SUSTAINED_LEVEL)
    with open(path, "w") as fh:
        fh.writelines(f"{r}\n" for r in rates)


def demo_spec(workload_path: str | Path) -> RunSpec:
    return parse_run_spec({
        "environment": "swim",
        "reward": {
            "tau": 1.0,
            "revenue_optional": 0.016,
            "revenue_mandatory": 0.01,
            "server_cost": 0.05,
        },
        "queue": {
            "service_rate": 10.0,
            "dimmer_latency_factor": 0.5,
            "boot_delay": 1,
            "saturation_latency": 5.0,
        },
        "sim": {
            "s_min": 1,
            "s_max": 10,
            "initial_servers": 6,
            "initial_dimmer": 0.5,
            "arrival_max": 100.0,
        },
        "workload": {"pattern": "trace-file", "path": str(workload_path)},
        "agent": {
            "discount": 0.95,
            "epsilon_start": 1.0,
            "epsilon_end": 0.02,
            "epsilon_decay_steps": 12_000,
            "learning_rate": 2e-3,
            "batch_size": 32,
            "replay_capacity": 50_000,
            "target_sync_interval": 500,
            "hidden_layers": [64, 64],
        },
        "env_model": {
            "retrain_interval": 2500,
            "fit_sample_cap": 6000,
            "epochs": 25,
        },
        "dines": {"rho": 0.3, "phi": 0.1},
    })
