"""The adaptation control loop: monitor, select, execute, learn, explain.

One iteration per decision interval: observe the environment state, pick an
action on the aggregated Q-values, execute it, store the transition, take a
training step, detect DINEs and append the full record to the trace.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .agent.core import AggregatedAgent
from .agent.replay import Transition
from .config import RunSpec
from .dines.detect import compute_extremum_basis, detect_uncertain, threshold_extrema
from .dines.envmodel import EnvironmentModel, train_env_model
from .env.gridworld import GRID_ACTION_NAMES, GRID_CHANNEL_NAMES, CliffWalk
from .env.rewards import CHANNEL_NAMES
from .env.swim import ACTION_NAMES, STATE_VAR_NAMES, SwimEnv
from .trace.store import Trace, TraceMeta, TraceRecord

log = logging.getLogger(__name__)

ThresholdsFn = Callable[[], tuple[float, float]]
RecordHook = Callable[[TraceRecord], None]


@dataclass
class RunResult:
    trace: Trace
    agent: AggregatedAgent
    model: EnvironmentModel
    episode_returns: list[float] = field(default_factory=list)

    @property
    def mean_episode_return(self) -> Optional[float]:
        if not self.episode_returns:
            return None
        return float(np.mean(self.episode_returns))


def build_trace_meta(spec: RunSpec) -> TraceMeta:
    if spec.environment == "gridworld":
        return TraceMeta(channel_names=GRID_CHANNEL_NAMES, action_names=GRID_ACTION_NAMES,
                         state_var_names=("row", "col"),
                         weights=(1.0, 1.0), rho=spec.dines.rho, phi=spec.dines.phi,
                         env_digest=spec.digest)
    return TraceMeta(channel_names=CHANNEL_NAMES, action_names=ACTION_NAMES,
                     state_var_names=STATE_VAR_NAMES,
                     weights=spec.reward.weights, rho=spec.dines.rho, phi=spec.dines.phi,
                     env_digest=spec.digest)


def run_training(spec: RunSpec, steps: int, seed: int,
                 thresholds_fn: ThresholdsFn | None = None,
                 record_hook: RecordHook | None = None,
                 log_every: int = 0) -> RunResult:
    """Run the full loop for ``steps`` decision intervals and return the trace.

    ``thresholds_fn`` supplies the live (rho, phi) each step, which lets a
    service adjust them at runtime; the defaults come from the run spec.
    All randomness is derived from ``seed`` plus the workload's own seed, so
    equal arguments reproduce the trace exactly.
    """
    if steps <= 0:
        raise ValueError(f"steps must be positive, got {steps}")

    gridworld = spec.environment == "gridworld"
    if gridworld:
        env = CliffWalk(spec.gridworld.height, spec.gridworld.width)
        obs = env.observe()
        raw = np.array(env.pos, dtype=float)
    else:
        env = SwimEnv(spec.sim_config())
        obs = env.observe()
        raw = env.raw_state_vector()

    agent = AggregatedAgent(state_dim=len(obs), n_actions=env.n_actions,
                            n_channels=env.n_channels, hyper=spec.agent, seed=seed)
    model = EnvironmentModel(state_dim=len(obs), n_actions=env.n_actions,
                             config=spec.env_model)
    trace = Trace(build_trace_meta(spec))
    thresholds_fn = thresholds_fn or (lambda: (spec.dines.rho, spec.dines.phi))

    episode_returns: list[float] = []
    episode_return = 0.0
    episode_steps = 0

    for t in range(steps):
        epsilon = agent.epsilon_current
        decision = agent.decide(obs)

        _, reward, terminal = env.step(decision.action)
        next_obs = env.observe()
        agent.store_transition(Transition(obs, decision.action, reward, next_obs, terminal))

        rho, phi = thresholds_fn()
        dines = []
        uncertain = detect_uncertain(decision.q_values, decision.action, rho, timestep=t)
        if uncertain is not None:
            dines.append(uncertain)
        basis = None
        if model.ready:
            basis = compute_extremum_basis(agent.predict_q_batch, model.predict,
                                           obs, env.n_actions)
            dines.extend(threshold_extrema(basis, phi, timestep=t))

        record = TraceRecord(timestep=t, raw_state=raw, action=decision.action,
                             reward=reward, q_values=decision.q_values,
                             epsilon_at_step=epsilon, exploratory=decision.exploratory,
                             dines=dines, extremum_basis=basis)
        trace.append(record)
        if record_hook is not None:
            record_hook(trace.records[-1])

        batch = agent.sample_batch()
        if batch is not None:
            agent.train_step(batch)

        agent.step_counter += 1
        agent.decay_epsilon()
        if agent.step_counter % spec.agent.target_sync_interval == 0:
            agent.sync_target_networks()
        if agent.step_counter % spec.env_model.retrain_interval == 0:
            train_env_model(model, agent.memory)

        episode_return += float(reward.sum())
        episode_steps += 1
        if gridworld and (terminal or episode_steps >= spec.gridworld.max_episode_steps):
            if terminal:
                episode_returns.append(episode_return)
            episode_return = 0.0
            episode_steps = 0
            env.reset()

        if gridworld:
            obs = env.observe()
            raw = np.array(env.pos, dtype=float)
        else:
            obs = next_obs
            raw = env.raw_state_vector()

        if log_every and (t + 1) % log_every == 0:
            log.info("step %d/%d epsilon=%.3f episodes=%d", t + 1, steps,
                     agent.epsilon_current, len(episode_returns))

    return RunResult(trace=trace, agent=agent, model=model, episode_returns=episode_returns)


def greedy_episode_return(agent: AggregatedAgent, env: CliffWalk, max_steps: int = 200) -> float:
    """Undiscounted return of one greedy episode from the start state."""
    env.reset()
    total = 0.0
    for _ in range(max_steps):
        action = agent.select_action(env.observe(), epsilon=0.0)
        _, reward, terminal = env.step(action)
        total += float(reward.sum())
        if terminal:
            break
    return total
