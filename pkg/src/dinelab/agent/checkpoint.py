"""Exact agent weight checkpoints (npz, versioned)."""
from __future__ import annotations

import json

import numpy as np

from .core import AggregatedAgent, Hyperparameters

CHECKPOINT_VERSION = 1


def save_agent(agent: AggregatedAgent, path: str) -> None:
    arrays: dict[str, np.ndarray] = {}
    for c, sa in enumerate(agent.sub_agents):
        for net_name, net in (("online", sa.online), ("target", sa.target)):
            for i, (w, b) in enumerate(zip(net.weights, net.biases)):
                arrays[f"c{c}_{net_name}_w{i}"] = w
                arrays[f"c{c}_{net_name}_b{i}"] = b
    header = {
        "version": CHECKPOINT_VERSION,
        "state_dim": agent.state_dim,
        "n_actions": agent.n_actions,
        "n_channels": agent.n_channels,
        "seed": agent.seed,
        "step_counter": agent.step_counter,
        "epsilon_current": agent.epsilon_current,
        "hyper": agent.hyper.__dict__ | {"hidden_layers": list(agent.hyper.hidden_layers)},
        "n_layers": len(agent.sub_agents[0].online.weights),
    }
    arrays["header"] = np.frombuffer(json.dumps(header).encode(), dtype=np.uint8)
    np.savez(path, **arrays)


def load_agent(path: str) -> AggregatedAgent:
    with np.load(path) as data:
        header = json.loads(bytes(data["header"]).decode())
        if header.get("version") != CHECKPOINT_VERSION:
            raise ValueError(
                f"unsupported checkpoint version {header.get('version')!r}, "
                f"expected {CHECKPOINT_VERSION}"
            )
        hyper = Hyperparameters(**header["hyper"])
        agent = AggregatedAgent(header["state_dim"], header["n_actions"],
                                header["n_channels"], hyper, seed=header["seed"])
        agent.step_counter = int(header["step_counter"])
        agent.epsilon_current = float(header["epsilon_current"])
        n_layers = header["n_layers"]
        for c, sa in enumerate(agent.sub_agents):
            for net_name, net in (("online", sa.online), ("target", sa.target)):
                net.weights = [data[f"c{c}_{net_name}_w{i}"].copy() for i in range(n_layers)]
                net.biases = [data[f"c{c}_{net_name}_b{i}"].copy() for i in range(n_layers)]
    return agent
