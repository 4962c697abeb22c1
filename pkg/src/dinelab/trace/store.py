"""Append-only decision trace: per-step states, rewards, Q-values and DINEs.

Records are immutable once appended. Q-matrices and extremum bases are kept
with each record so uncertain and extremum DINEs can be recomputed under new
thresholds without re-running the agent or its environment model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..dines.detect import detect_uncertain, threshold_extrema
from ..dines.types import Dine, ExtremumBasis, ExtremumDine, UncertainActionDine


@dataclass
class TraceMeta:
    channel_names: tuple[str, ...]
    action_names: tuple[str, ...]
    state_var_names: tuple[str, ...]
    weights: tuple[float, ...]
    rho: float
    phi: float
    env_digest: str = ""

    def __post_init__(self) -> None:
        self.channel_names = tuple(self.channel_names)
        self.action_names = tuple(self.action_names)
        self.state_var_names = tuple(self.state_var_names)
        self.weights = tuple(float(w) for w in self.weights)

    @property
    def n_channels(self) -> int:
        return len(self.channel_names)

    @property
    def n_actions(self) -> int:
        return len(self.action_names)


@dataclass
class TraceRecord:
    timestep: int
    raw_state: np.ndarray
    action: int
    reward: np.ndarray               # (n_channels,)
    q_values: np.ndarray             # (n_channels, n_actions)
    epsilon_at_step: float
    exploratory: bool
    dines: list[Dine] = field(default_factory=list)
    extremum_basis: Optional[ExtremumBasis] = None  # None while the model was not ready


@dataclass
class RefilteredDines:
    uncertain: list[UncertainActionDine]
    extrema: list[ExtremumDine]

    def by_timestep(self) -> dict[int, list[Dine]]:
        out: dict[int, list[Dine]] = {}
        for d in [*self.uncertain, *self.extrema]:
            out.setdefault(d.timestep, []).append(d)
        return out


class Trace:
    def __init__(self, meta: TraceMeta):
        self.meta = meta
        self.records: list[TraceRecord] = []

    def __len__(self) -> int:
        return len(self.records)

    @property
    def base_timestep(self) -> int:
        """First record's timestep; window exports keep their original numbering."""
        return self.records[0].timestep if self.records else 0

    def append(self, record: TraceRecord) -> None:
        if self.records:
            expected = self.records[-1].timestep + 1
            if record.timestep != expected:
                raise ValueError(f"expected timestep {expected}, got {record.timestep}")
        elif record.timestep < 0:
            raise ValueError(f"timestep must be >= 0, got {record.timestep}")
        q = np.array(record.q_values, dtype=float)
        if q.shape != (self.meta.n_channels, self.meta.n_actions):
            raise ValueError(
                f"q_values shape {q.shape} does not match metadata "
                f"({self.meta.n_channels}, {self.meta.n_actions})"
            )
        reward = np.array(record.reward, dtype=float)
        if reward.shape != (self.meta.n_channels,):
            raise ValueError(f"reward shape {reward.shape} does not match channel count")
        state = np.array(record.raw_state, dtype=float)
        if state.shape != (len(self.meta.state_var_names),):
            raise ValueError(
                f"raw_state shape {state.shape} does not match state variables "
                f"({len(self.meta.state_var_names)})"
            )
        if not 0 <= record.action < self.meta.n_actions:
            raise ValueError(f"action {record.action} out of range")
        self.records.append(TraceRecord(
            timestep=int(record.timestep), raw_state=state, action=int(record.action),
            reward=reward, q_values=q, epsilon_at_step=float(record.epsilon_at_step),
            exploratory=bool(record.exploratory), dines=list(record.dines),
            extremum_basis=record.extremum_basis,
        ))

    def window(self, from_t: int, to_t: int) -> list[TraceRecord]:
        """Records with timestep in [from_t, to_t], clamped to the trace bounds."""
        if from_t > to_t:
            raise ValueError(f"window start {from_t} is after end {to_t}")
        if not self.records:
            return []
        base = self.base_timestep
        lo = max(from_t, base)
        hi = min(to_t, self.records[-1].timestep)
        if lo > hi:
            return []
        return self.records[lo - base:hi - base + 1]

    def record_at(self, t: int) -> Optional[TraceRecord]:
        if not self.records:
            return None
        i = t - self.base_timestep
        if 0 <= i < len(self.records):
            return self.records[i]
        return None


@dataclass
class StandardizedView:
    var_names: tuple[str, ...]
    means: np.ndarray
    sigmas: np.ndarray   # population standard deviation
    z: np.ndarray        # (n_records, n_vars); all-zero columns where sigma == 0


def standardize(records: list[TraceRecord], var_names: tuple[str, ...]) -> StandardizedView:
    """Z-score each state variable over the window, population convention.

    A variable whose spread is at floating-point noise level relative to its
    magnitude counts as constant and maps to all zeros (a constant series can
    come out of ``std`` as ~1e-17, which would otherwise blow up to z = +-1).
    """
    if not records:
        n = len(var_names)
        return StandardizedView(var_names, np.zeros(n), np.zeros(n), np.zeros((0, n)))
    values = np.stack([r.raw_state for r in records])
    means = values.mean(axis=0)
    sigmas = values.std(axis=0)  # population
    tol = 1e-12 * np.maximum(1.0, np.abs(values).max(axis=0))
    constant = sigmas <= tol
    sigmas = np.where(constant, 0.0, sigmas)
    z = np.zeros_like(values)
    ok = ~constant
    z[:, ok] = (values[:, ok] - means[ok]) / sigmas[ok]
    return StandardizedView(tuple(var_names), means, sigmas, z)


def refilter(trace: Trace, rho: float, phi: float,
             from_t: Optional[int] = None, to_t: Optional[int] = None) -> RefilteredDines:
    """Recompute DINE sets under new thresholds from the stored snapshots.

    Uncertain DINEs come straight from the recorded Q matrices; extrema are
    re-thresholded from the persisted prediction bases. Records whose basis
    is missing (model not ready at the time) yield no extrema. Live-detected
    DINE fields on the records are left untouched.
    """
    records = trace.records
    if records and (from_t is not None or to_t is not None):
        records = trace.window(from_t if from_t is not None else trace.base_timestep,
                               to_t if to_t is not None else trace.records[-1].timestep)
    uncertain: list[UncertainActionDine] = []
    extrema: list[ExtremumDine] = []
    for r in records:
        d = detect_uncertain(r.q_values, r.action, rho, timestep=r.timestep)
        if d is not None:
            uncertain.append(d)
        if r.extremum_basis is not None:
            extrema.extend(threshold_extrema(r.extremum_basis, phi, timestep=r.timestep))
    return RefilteredDines(uncertain=uncertain, extrema=extrema)
