"""Reward-decomposed double DQN: one online/target network pair per channel.

Action selection sums the per-channel Q-vectors and picks the greedy column;
bootstrap targets pick the greedy next action on the summed online networks
and evaluate it on each channel's target network.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .nets import Mlp, chosen_action_loss_and_grads
from .replay import ReplayMemory, Transition


class TrainingDiverged(RuntimeError):
    """Raised when a training step produces a non-finite loss."""


@dataclass
class Hyperparameters:
    discount: float = 0.95
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_steps: int = 10_000
    learning_rate: float = 1e-3
    batch_size: int = 32
    replay_capacity: int = 50_000
    target_sync_interval: int = 500
    hidden_layers: tuple[int, ...] = (64, 64)

    def __post_init__(self) -> None:
        self.hidden_layers = tuple(int(h) for h in self.hidden_layers)
        if not 0.0 <= self.discount < 1.0:
            raise ValueError(f"discount must be in [0, 1), got {self.discount}")
        for name in ("epsilon_start", "epsilon_end"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.epsilon_end > self.epsilon_start:
            raise ValueError(
                f"epsilon_end ({self.epsilon_end}) must not exceed epsilon_start ({self.epsilon_start})"
            )
        if self.epsilon_decay_steps <= 0:
            raise ValueError(f"epsilon_decay_steps must be positive, got {self.epsilon_decay_steps}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size <= 0:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        if self.replay_capacity <= 0:
            raise ValueError(f"replay_capacity must be positive, got {self.replay_capacity}")
        if self.batch_size > self.replay_capacity:
            raise ValueError(
                f"batch_size ({self.batch_size}) must not exceed replay_capacity ({self.replay_capacity})"
            )
        if self.target_sync_interval <= 0:
            raise ValueError(f"target_sync_interval must be positive, got {self.target_sync_interval}")
        if any(h <= 0 for h in self.hidden_layers):
            raise ValueError(f"hidden layer sizes must be positive, got {self.hidden_layers}")


@dataclass
class SubAgent:
    channel_id: int
    online: Mlp
    target: Mlp


class Decision(NamedTuple):
    action: int
    exploratory: bool
    q_values: np.ndarray  # (n_channels, n_actions), online networks


def greedy_action(q: np.ndarray) -> int:
    """Argmax over actions of the channel-summed Q matrix; ties go to the lowest index."""
    q = np.asarray(q, dtype=float)
    return int(np.argmax(q.sum(axis=0)))


class AggregatedAgent:
    def __init__(self, state_dim: int, n_actions: int, n_channels: int,
                 hyper: Hyperparameters, seed: int = 0):
        if n_channels < 1:
            raise ValueError(f"need at least one reward channel, got {n_channels}")
        if n_actions < 1:
            raise ValueError(f"need at least one action, got {n_actions}")
        self.state_dim = int(state_dim)
        self.n_actions = int(n_actions)
        self.n_channels = int(n_channels)
        self.hyper = hyper
        self.seed = int(seed)
        init_seq, explore_seq, sample_seq = np.random.SeedSequence(seed).spawn(3)
        init_rng = np.random.default_rng(init_seq)
        self.explore_rng = np.random.default_rng(explore_seq)
        self.sample_rng = np.random.default_rng(sample_seq)

        dims = [self.state_dim, *hyper.hidden_layers, self.n_actions]
        self.sub_agents: list[SubAgent] = []
        for c in range(self.n_channels):
            online = Mlp(dims, init_rng)
            target = online.clone()
            self.sub_agents.append(SubAgent(channel_id=c, online=online, target=target))

        self.memory = ReplayMemory(hyper.replay_capacity, self.n_channels)
        self.step_counter = 0
        self.epsilon_current = hyper.epsilon_start

    # ---- evaluation -----------------------------------------------------

    def predict_q(self, state: np.ndarray) -> np.ndarray:
        """Per-channel online Q-vectors for one state, shape (n_channels, n_actions)."""
        return np.stack([sa.online.forward_one(state) for sa in self.sub_agents])

    def predict_q_batch(self, states: np.ndarray) -> np.ndarray:
        """Shape (n_channels, batch, n_actions)."""
        return np.stack([sa.online.forward(states) for sa in self.sub_agents])

    def select_action(self, state: np.ndarray, epsilon: float) -> int:
        return self._decide(state, epsilon).action

    def decide(self, state: np.ndarray) -> Decision:
        return self._decide(state, self.epsilon_current)

    def _decide(self, state: np.ndarray, epsilon: float) -> Decision:
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
        q = self.predict_q(state)
        exploratory = bool(self.explore_rng.random() < epsilon)
        if exploratory:
            action = int(self.explore_rng.integers(self.n_actions))
        else:
            action = greedy_action(q)
        return Decision(action, exploratory, q)

    # ---- training -------------------------------------------------------

    def store_transition(self, t: Transition) -> None:
        self.memory.add(t)

    def sample_batch(self):
        return self.memory.sample(self.hyper.batch_size, self.sample_rng)

    def compute_targets(self, batch: Sequence[Transition]) -> np.ndarray:
        """Bootstrap targets, shape (batch, n_channels).

        Terminal transitions keep the raw reward vector. Otherwise the next
        action is the greedy one on the summed online Q at s', evaluated per
        channel on that channel's target network.
        """
        if len(batch) == 0:
            raise ValueError("batch must be nonempty")
        rewards = np.stack([t.reward for t in batch])                 # (B, K)
        terminal = np.array([t.terminal for t in batch], dtype=bool)
        targets = rewards.copy()
        live = ~terminal
        if live.any() and self.hyper.discount > 0.0:
            next_states = np.stack([t.next_state for t in batch])[live]
            q_online = self.predict_q_batch(next_states)              # (K, B', A)
            a_star = np.argmax(q_online.sum(axis=0), axis=1)          # (B',)
            rows = np.arange(len(a_star))
            for c, sa in enumerate(self.sub_agents):
                q_target = sa.target.forward(next_states)             # (B', A)
                targets[live, c] += self.hyper.discount * q_target[rows, a_star]
        return targets

    def train_step(self, batch: Sequence[Transition]) -> np.ndarray:
        """One SGD step per channel on the squared bootstrap error.

        Returns the pre-step loss per channel; target networks are untouched.
        """
        targets = self.compute_targets(batch)
        if not np.isfinite(targets).all():
            bad = int(np.argmax(~np.isfinite(targets).all(axis=0)))
            raise TrainingDiverged(
                f"non-finite bootstrap target on channel {bad} at step {self.step_counter}"
            )
        states = np.stack([t.state for t in batch])
        actions = np.array([t.action for t in batch], dtype=int)
        losses = np.empty(self.n_channels)
        for c, sa in enumerate(self.sub_agents):
            loss, g_w, g_b = chosen_action_loss_and_grads(sa.online, states, actions, targets[:, c])
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"non-finite loss {loss!r} on channel {c} at step {self.step_counter}"
                )
            sa.online.sgd_step(g_w, g_b, self.hyper.learning_rate)
            losses[c] = loss
        return losses

    def sync_target_networks(self) -> None:
        for sa in self.sub_agents:
            sa.target.copy_weights_from(sa.online)

    # ---- exploration schedule -------------------------------------------

    def epsilon_at(self, step: int) -> float:
        h = self.hyper
        frac = min(1.0, max(0.0, step / h.epsilon_decay_steps))
        return h.epsilon_start + frac * (h.epsilon_end - h.epsilon_start)

    def decay_epsilon(self) -> float:
        self.epsilon_current = self.epsilon_at(self.step_counter)
        return self.epsilon_current
