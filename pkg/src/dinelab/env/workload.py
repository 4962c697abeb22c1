"""Synthetic request arrival-rate generators (stand-in for recorded traces)."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

log = logging.getLogger(__name__)

PATTERNS = ("constant", "step", "spike", "sinusoid", "trace-file")


@dataclass
class WorkloadConfig:
    pattern: str = "constant"
    level: float = 10.0        # constant / sinusoid midline / spike baseline
    high: float = 20.0         # step target level
    at: int = 5                # step time
    peak_level: Optional[float] = None  # optional short peak before the step settles
    peak_len: int = 0
    amplitude: float = 5.0     # sinusoid
    period: float = 200.0
    spike_level: float = 50.0  # spike
    spike_every: int = 100
    spike_len: int = 3
    path: Optional[str] = None  # trace-file
    noise: float = 0.0          # additive gaussian std, 0 disables
    seed: int = 0

    def __post_init__(self) -> None:
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown workload pattern {self.pattern!r}, expected one of {PATTERNS}")
        if self.noise < 0:
            raise ValueError(f"noise must be >= 0, got {self.noise}")
        if self.pattern == "trace-file" and not self.path:
            raise ValueError("trace-file pattern needs a path")


class WorkloadGenerator:
    """Emits one non-negative arrival rate per decision interval."""

    def __init__(self, config: WorkloadConfig):
        self.config = config
        self._trace: Optional[list[float]] = None
        if config.pattern == "trace-file":
            with open(config.path) as fh:
                self._trace = [float(line) for line in fh if line.strip()]
            if not self._trace:
                raise ValueError(f"workload trace {config.path!r} is empty")
        self.reset()

    def reset(self) -> None:
        self.t = 0
        self._rng = np.random.default_rng(self.config.seed)
        self._warned_wrap = False

    def _base_rate(self, t: int) -> float:
        c = self.config
        if c.pattern == "constant":
            return c.level
        if c.pattern == "step":
            if t < c.at:
                return c.level
            if c.peak_level is not None and t < c.at + c.peak_len:
                return c.peak_level
            return c.high
        if c.pattern == "spike":
            return c.spike_level if t % c.spike_every < c.spike_len else c.level
        if c.pattern == "sinusoid":
            return c.level + c.amplitude * math.sin(2.0 * math.pi * t / c.period)
        # trace-file
        assert self._trace is not None
        if t >= len(self._trace) and t % len(self._trace) == 0:
            log.warning("workload trace exhausted after %d entries, wrapping around", len(self._trace))
        return self._trace[t % len(self._trace)]

    def next(self) -> float:
        """Advance one interval and return the arrival rate."""
        rate = self._base_rate(self.t)
        if self.config.noise > 0:
            rate += self._rng.normal(0.0, self.config.noise)
        self.t += 1
        return max(0.0, rate)
