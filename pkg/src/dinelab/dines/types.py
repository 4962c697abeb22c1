"""Datatypes for the three decomposed interestingness elements (DINEs)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

AGGREGATE = "aggregate"  # extremum scope covering the summed agent
Scope = Union[int, str]


@dataclass
class Thresholds:
    rho: float = 0.3   # uncertain-action normalized gap threshold
    phi: float = 0.1   # extremum margin in raw Q units

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.phi < 0.0:
            raise ValueError(f"phi must be >= 0, got {self.phi}")


@dataclass
class DominanceChart:
    timestep: int
    absolute: np.ndarray     # (n_channels, n_actions) raw Q
    relative: np.ndarray     # per channel, worst action subtracted
    chosen_action: int
    dominant_channel: int    # largest relative value at the chosen action

    def as_dict(self) -> dict:
        return {
            "kind": "dominance",
            "timestep": self.timestep,
            "absolute": self.absolute.tolist(),
            "relative": self.relative.tolist(),
            "chosen_action": self.chosen_action,
            "dominant_channel": self.dominant_channel,
        }


@dataclass(frozen=True)
class ContrastiveEntry:
    channel: int
    preferred_action: int
    normalized_gap: float  # in [0, 1]


@dataclass
class UncertainActionDine:
    timestep: int
    chosen_action: int
    contrastive: list[ContrastiveEntry]

    def as_dict(self) -> dict:
        return {
            "kind": "uncertain",
            "timestep": self.timestep,
            "chosen_action": self.chosen_action,
            "contrastive": [
                {"channel": e.channel, "preferred_action": e.preferred_action,
                 "normalized_gap": e.normalized_gap}
                for e in self.contrastive
            ],
        }

    @staticmethod
    def from_dict(d: dict) -> "UncertainActionDine":
        return UncertainActionDine(
            timestep=d["timestep"],
            chosen_action=d["chosen_action"],
            contrastive=[ContrastiveEntry(e["channel"], e["preferred_action"], e["normalized_gap"])
                         for e in d["contrastive"]],
        )


@dataclass
class ExtremumDine:
    timestep: int
    scope: Scope              # channel index or AGGREGATE
    kind: str                 # "maximum" | "minimum"
    state_value: float
    predicted_next_values: list[float]

    def as_dict(self) -> dict:
        return {
            "kind": "extremum",
            "timestep": self.timestep,
            "scope": self.scope,
            "extremum": self.kind,
            "state_value": self.state_value,
            "predicted_next_values": list(self.predicted_next_values),
        }

    @staticmethod
    def from_dict(d: dict) -> "ExtremumDine":
        return ExtremumDine(
            timestep=d["timestep"],
            scope=d["scope"],
            kind=d["extremum"],
            state_value=d["state_value"],
            predicted_next_values=list(d["predicted_next_values"]),
        )


Dine = Union[DominanceChart, UncertainActionDine, ExtremumDine]


@dataclass(frozen=True)
class ScopeBasis:
    scope: Scope
    state_value: float
    predicted_next_values: tuple[float, ...]  # one per action


@dataclass
class ExtremumBasis:
    """State values at a step plus the model-predicted successors, per scope.

    Persisted with the trace so extrema can be re-thresholded later without
    the environment model.
    """
    scopes: list[ScopeBasis]

    def as_dict(self) -> dict:
        return {
            "scopes": [
                {"scope": s.scope, "state_value": s.state_value,
                 "predicted_next_values": list(s.predicted_next_values)}
                for s in self.scopes
            ]
        }

    @staticmethod
    def from_dict(d: dict) -> "ExtremumBasis":
        return ExtremumBasis(scopes=[
            ScopeBasis(s["scope"], s["state_value"], tuple(s["predicted_next_values"]))
            for s in d["scopes"]
        ])


def dine_from_dict(d: dict) -> Dine:
    kind = d.get("kind")
    if kind == "uncertain":
        return UncertainActionDine.from_dict(d)
    if kind == "extremum":
        return ExtremumDine.from_dict(d)
    raise ValueError(f"unknown dine kind {kind!r}")
