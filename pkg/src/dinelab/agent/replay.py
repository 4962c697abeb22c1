"""Bounded FIFO replay memory over vector-reward transitions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class Transition:
    state: np.ndarray
    action: int
    reward: np.ndarray          # one entry per reward channel
    next_state: np.ndarray
    terminal: bool


class ReplayMemory:
    """FIFO buffer of at most ``capacity`` transitions, oldest evicted first."""

    def __init__(self, capacity: int, n_channels: int):
        if capacity <= 0:
            raise ValueError(f"capacity must be positive, got {capacity}")
        if n_channels <= 0:
            raise ValueError(f"n_channels must be positive, got {n_channels}")
        self.capacity = capacity
        self.n_channels = n_channels
        self._buffer: deque[Transition] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._buffer)

    def add(self, t: Transition) -> None:
        reward = np.asarray(t.reward, dtype=float)
        if reward.shape != (self.n_channels,):
            raise ValueError(
                f"reward vector must have {self.n_channels} channels, got shape {reward.shape}"
            )
        state = np.asarray(t.state, dtype=float)
        next_state = np.asarray(t.next_state, dtype=float)
        if state.shape != next_state.shape:
            raise ValueError(
                f"state/next_state dim mismatch: {state.shape} vs {next_state.shape}"
            )
        self._buffer.append(Transition(state, int(t.action), reward, next_state, bool(t.terminal)))

    def sample(self, batch_size: int, rng: np.random.Generator) -> Optional[list[Transition]]:
        """Uniform sample without replacement; None when not enough data yet."""
        if batch_size > len(self._buffer):
            return None
        idx = rng.choice(len(self._buffer), size=batch_size, replace=False)
        return [self._buffer[i] for i in idx]

    def recent(self, n: int) -> list[Transition]:
        n = min(n, len(self._buffer))
        return list(self._buffer)[len(self._buffer) - n:]

    def all(self) -> list[Transition]:
        return list(self._buffer)
