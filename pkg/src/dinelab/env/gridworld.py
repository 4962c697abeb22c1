"""Cliff-walk grid used as a small, fully known test fixture.

Two reward channels: a -1 step cost and a -100 cliff penalty. Falling off
the cliff or reaching the goal ends the episode.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GRID_ACTION_NAMES = ("Up", "Right", "Down", "Left")
GRID_CHANNEL_NAMES = ("StepCost", "CliffPenalty")
_MOVES = ((-1, 0), (0, 1), (1, 0), (0, -1))


@dataclass
class CliffWalk:
    height: int = 4
    width: int = 12

    n_actions = 4
    n_channels = 2

    def __post_init__(self) -> None:
        if self.height < 2 or self.width < 3:
            raise ValueError(f"grid too small: {self.height}x{self.width}")
        self.start = (self.height - 1, 0)
        self.goal = (self.height - 1, self.width - 1)
        self.cliff = {(self.height - 1, c) for c in range(1, self.width - 1)}
        self.reset()

    @property
    def n_states(self) -> int:
        return self.height * self.width

    @property
    def observation_dim(self) -> int:
        return self.n_states

    def reset(self) -> tuple[int, int]:
        self.pos = self.start
        return self.pos

    def state_index(self, pos: tuple[int, int] | None = None) -> int:
        r, c = pos if pos is not None else self.pos
        return r * self.width + c

    def observe(self, pos: tuple[int, int] | None = None) -> np.ndarray:
        one_hot = np.zeros(self.n_states)
        one_hot[self.state_index(pos)] = 1.0
        return one_hot

    def step(self, action: int) -> tuple[tuple[int, int], np.ndarray, bool]:
        dr, dc = _MOVES[action]
        r = min(max(self.pos[0] + dr, 0), self.height - 1)
        c = min(max(self.pos[1] + dc, 0), self.width - 1)
        self.pos = (r, c)
        reward = np.array([-1.0, 0.0])
        if self.pos in self.cliff:
            reward[1] = -100.0
            return self.pos, reward, True
        return self.pos, reward, self.pos == self.goal
