"""Learned forward model of the environment, trained on the replay memory.

Inputs are (state, one-hot action), the target is the successor state. The
model is retrained from scratch at a fixed step interval; extremum detection
stays suppressed until the first successful fit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..agent.nets import Mlp, regression_loss_and_grads
from ..agent.replay import ReplayMemory


@dataclass
class EnvModelConfig:
    hidden: tuple[int, ...] = (64,)
    learning_rate: float = 0.05
    momentum: float = 0.9
    epochs: int = 40
    batch_size: int = 64
    holdout_fraction: float = 0.1
    min_samples: int = 1000
    retrain_interval: int = 1000
    fit_sample_cap: int = 8192  # bounds the cost of one retrain
    seed: int = 0

    def __post_init__(self) -> None:
        self.hidden = tuple(int(h) for h in self.hidden)
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ValueError(f"holdout_fraction must be in (0, 1), got {self.holdout_fraction}")
        if self.min_samples < 2:
            raise ValueError(f"min_samples must be >= 2, got {self.min_samples}")
        if self.learning_rate <= 0 or self.epochs <= 0 or self.batch_size <= 0:
            raise ValueError("learning_rate, epochs and batch_size must be positive")


class EnvironmentModel:
    def __init__(self, state_dim: int, n_actions: int, config: EnvModelConfig | None = None):
        self.state_dim = int(state_dim)
        self.n_actions = int(n_actions)
        self.config = config or EnvModelConfig()
        self.ready = False
        self.samples_seen = 0
        self.holdout_error: Optional[np.ndarray] = None  # per-dimension MSE
        self._retrain_count = 0
        self._init_net(np.random.default_rng(self.config.seed))

    def _init_net(self, rng: np.random.Generator) -> None:
        dims = [self.state_dim + self.n_actions, *self.config.hidden, self.state_dim]
        self.net = Mlp(dims, rng)
        self._vel_w = [np.zeros_like(w) for w in self.net.weights]
        self._vel_b = [np.zeros_like(b) for b in self.net.biases]

    def encode(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        states = np.atleast_2d(np.asarray(states, dtype=float))
        one_hot = np.zeros((len(states), self.n_actions))
        one_hot[np.arange(len(states)), np.asarray(actions, dtype=int)] = 1.0
        return np.hstack([states, one_hot])

    def predict(self, state: np.ndarray, action: int) -> np.ndarray:
        if not self.ready:
            raise RuntimeError("environment model not trained yet")
        x = self.encode(np.asarray(state)[None, :], np.array([action]))
        return self.net.forward(x)[0]

    def _momentum_step(self, g_w, g_b) -> None:
        lr, mom = self.config.learning_rate, self.config.momentum
        for i, g in enumerate(g_w):
            self._vel_w[i] = mom * self._vel_w[i] - lr * g
            self.net.weights[i] += self._vel_w[i]
        for i, g in enumerate(g_b):
            self._vel_b[i] = mom * self._vel_b[i] - lr * g
            self.net.biases[i] += self._vel_b[i]


def train_env_model(model: EnvironmentModel, memory: ReplayMemory,
                    epochs: int | None = None,
                    holdout_fraction: float | None = None) -> Optional[np.ndarray]:
    """Fit the forward model on the replay contents.

    Returns the held-out per-dimension MSE, or None (model not ready) when
    the memory holds fewer than ``min_samples`` transitions. Each call
    retrains from scratch with a derived seed, so repeated fits on the same
    memory are reproducible.
    """
    cfg = model.config
    if len(memory) < cfg.min_samples:
        return None
    epochs = cfg.epochs if epochs is None else epochs
    holdout_fraction = cfg.holdout_fraction if holdout_fraction is None else holdout_fraction

    rng = np.random.default_rng([cfg.seed, model._retrain_count])
    model._retrain_count += 1
    model._init_net(rng)

    transitions = memory.all()
    if len(transitions) > cfg.fit_sample_cap:
        keep = rng.choice(len(transitions), size=cfg.fit_sample_cap, replace=False)
        transitions = [transitions[i] for i in keep]
    states = np.stack([t.state for t in transitions])
    actions = np.array([t.action for t in transitions], dtype=int)
    targets = np.stack([t.next_state for t in transitions])
    x = model.encode(states, actions)

    n = len(x)
    order = rng.permutation(n)
    n_holdout = max(1, int(round(n * holdout_fraction)))
    holdout, train = order[:n_holdout], order[n_holdout:]

    for _ in range(epochs):
        for start in range(0, len(train), cfg.batch_size):
            idx = train[start:start + cfg.batch_size]
            _, g_w, g_b = regression_loss_and_grads(model.net, x[idx], targets[idx])
            model._momentum_step(g_w, g_b)
        train = rng.permutation(train)

    pred = model.net.forward(x[holdout])
    model.holdout_error = np.mean((pred - targets[holdout]) ** 2, axis=0)
    model.samples_seen = n
    model.ready = True
    return model.holdout_error


class TruePredictor:
    """Adapter exposing a known transition function as a ready model."""

    ready = True

    def __init__(self, fn):
        self._fn = fn

    def predict(self, state: np.ndarray, action: int) -> np.ndarray:
        return np.asarray(self._fn(state, action), dtype=float)
