"""Detectors for the three DINE kinds.

All detectors are pure functions over Q-value snapshots, so they can run
live in the training loop and again later when a trace is re-filtered with
different thresholds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .types import (
    AGGREGATE,
    ContrastiveEntry,
    DominanceChart,
    ExtremumBasis,
    ExtremumDine,
    ScopeBasis,
    UncertainActionDine,
)


def dominance(q: np.ndarray, chosen_action: int, timestep: int = 0) -> DominanceChart:
    """Absolute and relative reward-channel dominance for one decision."""
    q = np.asarray(q, dtype=float)
    if not np.isfinite(q).all():
        raise ValueError("Q matrix contains non-finite values")
    relative = q - q.min(axis=1, keepdims=True)
    dominant = int(np.argmax(relative[:, chosen_action]))
    return DominanceChart(timestep=timestep, absolute=q.copy(), relative=relative,
                          chosen_action=int(chosen_action), dominant_channel=dominant)


def state_value(q_row: np.ndarray) -> float:
    """Value of a state under a Q-vector: the greedy action's value."""
    q_row = np.asarray(q_row, dtype=float)
    if q_row.size == 0:
        raise ValueError("empty Q row")
    return float(q_row.max())


def detect_uncertain(q: np.ndarray, chosen_action: int, rho: float,
                     timestep: int = 0) -> Optional[UncertainActionDine]:
    """Uncertain-action DINE: channels whose preferred action disagrees with
    the chosen one by a normalized gap of at least rho.

    Each channel's row is shifted so its worst action scores 0, then scaled
    so its best scores 1; the gap is 1 minus the chosen action's normalized
    score. A constant row abstains.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    q = np.asarray(q, dtype=float)
    if not np.isfinite(q).all():
        raise ValueError("Q matrix contains non-finite values")
    entries: list[ContrastiveEntry] = []
    for c in range(q.shape[0]):
        rel = q[c] - q[c].min()
        top = rel.max()
        if top <= 0.0:
            continue
        preferred = int(np.argmax(rel))
        if preferred == chosen_action:
            continue
        gap = 1.0 - rel[chosen_action] / top
        if gap >= rho:
            entries.append(ContrastiveEntry(c, preferred, float(gap)))
    if not entries:
        return None
    return UncertainActionDine(timestep=timestep, chosen_action=int(chosen_action),
                               contrastive=entries)


# ---- reward channel extremum --------------------------------------------

QBatchFn = Callable[[np.ndarray], np.ndarray]     # (n_states, dim) -> (K, n_states, A)
PredictFn = Callable[[np.ndarray, int], np.ndarray]


@dataclass
class ExtremaResult:
    dines: list[ExtremumDine]
    suppressed: bool  # True when the environment model was not ready


def compute_extremum_basis(q_batch_fn: QBatchFn, predict_fn: PredictFn,
                           state: np.ndarray, n_actions: int) -> ExtremumBasis:
    """State values for the current state and every predicted successor,
    per channel and for the aggregate scope."""
    state = np.asarray(state, dtype=float)
    probes = np.stack([state] + [np.asarray(predict_fn(state, a), dtype=float)
                                 for a in range(n_actions)])
    q = q_batch_fn(probes)                      # (K, n_actions + 1, A)
    per_channel = q.max(axis=2)                 # (K, n_actions + 1)
    aggregate = q.sum(axis=0).max(axis=1)       # (n_actions + 1,)
    scopes = [
        ScopeBasis(c, float(per_channel[c, 0]), tuple(float(v) for v in per_channel[c, 1:]))
        for c in range(q.shape[0])
    ]
    scopes.append(ScopeBasis(AGGREGATE, float(aggregate[0]),
                             tuple(float(v) for v in aggregate[1:])))
    return ExtremumBasis(scopes=scopes)


def threshold_extrema(basis: ExtremumBasis, phi: float, timestep: int = 0) -> list[ExtremumDine]:
    """Apply the margin phi to a recorded basis."""
    if phi < 0.0:
        raise ValueError(f"phi must be >= 0, got {phi}")
    out: list[ExtremumDine] = []
    for s in basis.scopes:
        preds = np.asarray(s.predicted_next_values)
        if preds.max() < s.state_value - phi:
            out.append(ExtremumDine(timestep, s.scope, "maximum", s.state_value,
                                    list(s.predicted_next_values)))
        elif preds.min() > s.state_value + phi:
            out.append(ExtremumDine(timestep, s.scope, "minimum", s.state_value,
                                    list(s.predicted_next_values)))
    return out


def detect_extrema(q_batch_fn: QBatchFn, model, state: np.ndarray, phi: float,
                   n_actions: int, timestep: int = 0) -> ExtremaResult:
    """Extremum DINEs at a state; suppressed until the forward model is ready.

    ``model`` needs a ``ready`` flag and a ``predict(state, action)`` method;
    any true transition function wrapped accordingly works too.
    """
    if not getattr(model, "ready", True):
        return ExtremaResult(dines=[], suppressed=True)
    basis = compute_extremum_basis(q_batch_fn, model.predict, state, n_actions)
    return ExtremaResult(dines=threshold_extrema(basis, phi, timestep), suppressed=False)
