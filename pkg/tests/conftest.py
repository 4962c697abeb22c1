import numpy as np
import pytest

from dinelab.dines.types import ExtremumBasis, ScopeBasis
from dinelab.trace.store import Trace, TraceMeta, TraceRecord


@pytest.fixture
def small_meta():
    return TraceMeta(channel_names=("UserSatisfaction", "Revenue"),
                     action_names=("NoAdaptation", "AddServer"),
                     state_var_names=("load", "latency"),
                     weights=(4.0, 2.0), rho=0.3, phi=0.1, env_digest="test")


def make_basis(rng, n_channels, n_actions):
    scopes = []
    for c in range(n_channels):
        scopes.append(ScopeBasis(c, float(rng.normal()),
                                 tuple(float(v) for v in rng.normal(size=n_actions))))
    scopes.append(ScopeBasis("aggregate", float(rng.normal()),
                             tuple(float(v) for v in rng.normal(size=n_actions))))
    return ExtremumBasis(scopes=scopes)


def synthetic_trace(n=40, seed=0, meta=None, with_basis=True):
    """Trace of random records with enough variety to exercise every detector."""
    meta = meta or TraceMeta(channel_names=("UserSatisfaction", "Revenue", "RunningCosts"),
                             action_names=("AddServer", "RemoveServer", "IncreaseDimmer",
                                           "DecreaseDimmer", "NoAdaptation"),
                             state_var_names=("arrival_rate", "avg_latency", "throughput",
                                              "servers", "dimmer"),
                             weights=(4.0, 2.0, 1.0), rho=0.3, phi=0.1, env_digest="synthetic")
    rng = np.random.default_rng(seed)
    trace = Trace(meta)
    for t in range(n):
        q = rng.normal(size=(meta.n_channels, meta.n_actions))
        basis = make_basis(rng, meta.n_channels, meta.n_actions) if with_basis and t % 3 else None
        trace.append(TraceRecord(
            timestep=t,
            raw_state=rng.uniform(size=len(meta.state_var_names)),
            action=int(rng.integers(meta.n_actions)),
            reward=rng.normal(size=meta.n_channels),
            q_values=q,
            epsilon_at_step=float(rng.uniform()),
            exploratory=bool(rng.random() < 0.2),
            dines=[],
            extremum_basis=basis,
        ))
    return trace


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
