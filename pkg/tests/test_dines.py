import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dinelab.agent.replay import ReplayMemory, Transition
from dinelab.dines.detect import (
    compute_extremum_basis,
    detect_extrema,
    detect_uncertain,
    dominance,
    state_value,
    threshold_extrema,
)
from dinelab.dines.envmodel import EnvironmentModel, EnvModelConfig, TruePredictor, train_env_model
from dinelab.dines.text import render_counterfactual
from dinelab.dines.types import Thresholds

# ---- dominance ---------------------------------------------------------------

def test_relative_subtracts_worst():
    chart = dominance(np.array([[2.0, -1.0, 0.5]]), chosen_action=0)
    assert np.array_equal(chart.relative, np.array([[3.0, 0.0, 1.5]]))
    assert np.array_equal(chart.absolute, np.array([[2.0, -1.0, 0.5]]))


def test_constant_row_maps_to_zero():
    chart = dominance(np.array([[0.7, 0.7, 0.7]]), chosen_action=1)
    assert np.array_equal(chart.relative, np.zeros((1, 3)))


def test_dominant_channel_is_largest_relative_at_choice():
    q = np.array([[1.0, 0.0], [0.2, 1.2], [5.0, 5.0]])
    chart = dominance(q, chosen_action=0)
    assert chart.dominant_channel == 0


def test_dominance_rejects_non_finite():
    with pytest.raises(ValueError):
        dominance(np.array([[np.nan, 0.0]]), 0)


@settings(max_examples=200, deadline=None)
@given(q=arrays(float, (3, 4), elements=st.integers(-500, 500).map(float)))
def test_relative_preserves_aggregated_argmax(q):
    chart = dominance(q, chosen_action=0)
    assert int(np.argmax(chart.relative.sum(axis=0))) == int(np.argmax(chart.absolute.sum(axis=0)))
    # every relative row bottoms out at exactly zero
    assert np.array_equal(chart.relative.min(axis=1), np.zeros(3))
    assert np.all(chart.relative >= 0.0)


def test_greedy_choice_has_highest_summed_relative():
    rng = np.random.default_rng(0)
    for _ in range(200):
        q = rng.normal(size=(3, 5))
        greedy = int(np.argmax(q.sum(axis=0)))
        chart = dominance(q, chosen_action=greedy)
        assert int(np.argmax(chart.relative.sum(axis=0))) == greedy


# ---- state value ----------------------------------------------------------------

def test_state_value():
    assert state_value(np.array([1.0, 2.0, 3.0])) == 3.0
    assert state_value(np.array([0.4, 0.4])) == 0.4
    assert state_value(np.array([-2.5])) == -2.5
    with pytest.raises(ValueError):
        state_value(np.array([]))


# ---- uncertain actions -----------------------------------------------------------

def test_no_dine_when_all_channels_agree():
    q = np.array([[3.0, 1.0], [0.5, 0.2]])  # both prefer action 0
    assert detect_uncertain(q, chosen_action=0, rho=0.0) is None


def test_zero_threshold_emits_on_any_disagreement():
    q = np.array([[3.0, 1.0], [0.1, 0.2]])
    dine = detect_uncertain(q, chosen_action=0, rho=0.0)
    assert dine is not None
    assert [e.channel for e in dine.contrastive] == [1]


def test_worked_example_channel_one_prefers_action_one():
    # summed Q [1.2, 1.2] ties to action 0; channel 1's relative row is [0, 1],
    # so the chosen action sits at the channel's worst: gap 1.0 >= 0.5
    q = np.array([[1.0, 0.0], [0.2, 1.2]])
    dine = detect_uncertain(q, chosen_action=0, rho=0.5)
    assert dine is not None
    assert len(dine.contrastive) == 1
    entry = dine.contrastive[0]
    assert (entry.channel, entry.preferred_action) == (1, 1)
    assert entry.normalized_gap == pytest.approx(1.0, abs=0)


def test_constant_channel_abstains():
    q = np.array([[1.0, 1.0], [0.0, 2.0]])
    dine = detect_uncertain(q, chosen_action=0, rho=0.0)
    assert [e.channel for e in dine.contrastive] == [1]


def test_gap_below_threshold_suppresses():
    q = np.array([[0.0, 8.0, 6.0]])
    # channel prefers action 1; chosen 2 scores 0.75 -> gap exactly 0.25
    assert detect_uncertain(q, chosen_action=2, rho=0.3) is None
    dine = detect_uncertain(q, chosen_action=2, rho=0.25)
    assert dine.contrastive[0].normalized_gap == 0.25


@settings(max_examples=200, deadline=None)
@given(q=arrays(float, (3, 4), elements=st.floats(-20, 20)),
       chosen=st.integers(0, 3), rho=st.floats(0, 1))
def test_preferred_never_equals_chosen(q, chosen, rho):
    dine = detect_uncertain(q, chosen, rho)
    if dine is not None:
        assert all(e.preferred_action != chosen for e in dine.contrastive)
        assert all(e.normalized_gap >= rho for e in dine.contrastive)


@settings(max_examples=100, deadline=None)
@given(q=arrays(float, (2, 4), elements=st.floats(-20, 20)),
       chosen=st.integers(0, 3), scale=st.floats(0.01, 50))
def test_positive_scaling_leaves_verdict_unchanged(q, chosen, scale):
    base = detect_uncertain(q, chosen, rho=0.25)
    scaled_q = q.copy()
    scaled_q[0] *= scale
    scaled = detect_uncertain(scaled_q, chosen, rho=0.25)
    base_entries = [] if base is None else [(e.channel, e.preferred_action) for e in base.contrastive]
    scaled_entries = [] if scaled is None else [(e.channel, e.preferred_action) for e in scaled.contrastive]
    assert base_entries == scaled_entries


@settings(max_examples=100, deadline=None)
@given(q=arrays(float, (3, 4), elements=st.floats(-20, 20)), chosen=st.integers(0, 3))
def test_uncertain_sets_shrink_as_rho_grows(q, chosen):
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    def entries(rho):
        d = detect_uncertain(q, chosen, rho)
        return set() if d is None else {(e.channel, e.preferred_action) for e in d.contrastive}
    sets = [entries(r) for r in grid]
    for bigger, smaller in zip(sets, sets[1:]):
        assert smaller <= bigger


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(rho=1.5)
    with pytest.raises(ValueError):
        Thresholds(phi=-0.1)
    assert Thresholds() == Thresholds(rho=0.3, phi=0.1)


# ---- counterfactual text -----------------------------------------------------------

CHANNELS = ("UserSatisfaction", "Revenue", "RunningCosts")
ACTIONS = ("AddServer", "RemoveServer", "IncreaseDimmer", "DecreaseDimmer", "NoAdaptation")


def worked_example_dine_and_chart():
    # chosen NoAdaptation (4); Revenue prefers AddServer (0); UserSatisfaction dominates
    q = np.array([
        [0.0, -1.0, -1.0, -1.0, 4.0],   # UserSatisfaction backs NoAdaptation
        [2.0, 0.0, 0.0, 0.0, 1.0],      # Revenue prefers AddServer
        [0.5, 0.4, 0.4, 0.4, 0.6],      # RunningCosts roughly indifferent
    ])
    dine = detect_uncertain(q, chosen_action=4, rho=0.3)
    chart = dominance(q, chosen_action=4)
    return q, dine, chart


def test_counterfactual_matches_template_exactly():
    _, dine, chart = worked_example_dine_and_chart()
    assert [ (e.channel, e.preferred_action) for e in dine.contrastive ] == [(1, 0)]
    assert chart.dominant_channel == 0
    text = render_counterfactual(dine, chart, CHANNELS, ACTIONS)
    assert text == (
        "To reach the goal Revenue, I should actually choose action AddServer. "
        "However, it is currently more important to choose action NoAdaptation "
        "to achieve the goal UserSatisfaction."
    )


def test_counterfactual_empty_for_no_entries():
    q = np.array([[1.0, 0.0], [2.0, 0.0]])
    chart = dominance(q, chosen_action=0)
    dine = detect_uncertain(q, chosen_action=0, rho=0.0)
    assert dine is None  # nothing to render
    from dinelab.dines.types import UncertainActionDine
    empty = UncertainActionDine(timestep=0, chosen_action=0, contrastive=[])
    assert render_counterfactual(empty, chart, ("A", "B"), ("x", "y")) == ""


def test_counterfactual_two_paragraphs_in_channel_order():
    q = np.array([
        [0.0, 0.0, 5.0],    # prefers IncreaseDimmer
        [3.0, 0.0, 0.0],    # prefers AddServer
        [0.0, 4.0, 1.0],    # prefers RemoveServer
    ])
    dine = detect_uncertain(q, chosen_action=2, rho=0.5)
    chart = dominance(q, chosen_action=2)
    text = render_counterfactual(dine, chart, CHANNELS, ACTIONS)
    paragraphs = text.split("\n\n")
    assert len(paragraphs) == 2
    assert "Revenue" in paragraphs[0] and "AddServer" in paragraphs[0]
    assert "RunningCosts" in paragraphs[1] and "RemoveServer" in paragraphs[1]


def test_counterfactual_rejects_unknown_labels_and_timestep_mismatch():
    _, dine, chart = worked_example_dine_and_chart()
    with pytest.raises(ValueError, match="channel"):
        render_counterfactual(dine, chart, ("OnlyOne",), ACTIONS)
    with pytest.raises(ValueError, match="action"):
        render_counterfactual(dine, chart, CHANNELS, ("Too", "Few"))
    chart.timestep = 5
    with pytest.raises(ValueError, match="timestep"):
        render_counterfactual(dine, chart, CHANNELS, ACTIONS)


# ---- environment model ---------------------------------------------------------------

def fill_memory(memory, transition_fn, n, state_dim, n_actions, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        s = rng.uniform(-1, 1, size=state_dim)
        a = int(rng.integers(n_actions))
        memory.add(Transition(s, a, np.zeros(1), transition_fn(s, a), False))


def test_model_not_ready_below_minimum():
    cfg = EnvModelConfig(min_samples=100)
    model = EnvironmentModel(state_dim=2, n_actions=3, config=cfg)
    memory = ReplayMemory(1000, n_channels=1)
    fill_memory(memory, lambda s, a: s, 99, 2, 3)
    assert train_env_model(model, memory) is None
    assert model.ready is False
    result = detect_extrema(lambda x: np.zeros((1, len(x), 3)), model, np.zeros(2),
                            phi=0.1, n_actions=3)
    assert result.suppressed is True
    assert result.dines == []
    with pytest.raises(RuntimeError, match="not trained"):
        model.predict(np.zeros(2), 0)


def test_model_learns_identity_dynamics():
    cfg = EnvModelConfig(min_samples=500, epochs=60, learning_rate=0.05, seed=1)
    model = EnvironmentModel(state_dim=3, n_actions=2, config=cfg)
    memory = ReplayMemory(5000, n_channels=1)
    fill_memory(memory, lambda s, a: s, 2000, 3, 2)
    err = train_env_model(model, memory)
    assert model.ready is True
    assert np.all(err < 1e-3)


def test_model_learns_linear_dynamics_with_action_offsets():
    offsets = np.array([[0.3, -0.1], [-0.2, 0.25], [0.0, 0.1]])
    fn = lambda s, a: 0.5 * s + offsets[a]
    cfg = EnvModelConfig(min_samples=500, epochs=60, learning_rate=0.05, seed=2)
    model = EnvironmentModel(state_dim=2, n_actions=3, config=cfg)
    memory = ReplayMemory(5000, n_channels=1)
    fill_memory(memory, fn, 3000, 2, 3)
    train_env_model(model, memory)
    rng = np.random.default_rng(3)
    states = rng.uniform(-1, 1, size=(50, 2))
    sigma = states.std(axis=0)
    for s in states:
        for a in range(3):
            err = np.abs(model.predict(s, a) - fn(s, a)) / sigma
            assert np.all(err < 0.05)


def test_retraining_is_reproducible():
    cfg = EnvModelConfig(min_samples=100, epochs=5, seed=7)
    memory = ReplayMemory(1000, n_channels=1)
    fill_memory(memory, lambda s, a: 0.9 * s, 300, 2, 2)
    a = EnvironmentModel(2, 2, cfg)
    b = EnvironmentModel(2, 2, cfg)
    err_a = train_env_model(a, memory)
    err_b = train_env_model(b, memory)
    assert np.array_equal(err_a, err_b)
    probe = np.array([0.3, -0.4])
    assert np.array_equal(a.predict(probe, 1), b.predict(probe, 1))


# ---- extrema ---------------------------------------------------------------------------

def q_table_fns(tables):
    """(K, n_states, A) tables over integer chain states observed as [s/4]."""
    tables = np.asarray(tables, dtype=float)

    def q_batch(states):
        idx = np.rint(np.asarray(states)[:, 0] * 4).astype(int)
        return tables[:, idx, :]

    return q_batch


CHAIN_T = lambda s, a: np.array([min(max(s[0] + (0.25 if a else -0.25), 0.0), 1.0)])


def brute_force_extrema(tables, phi):
    """Enumerate the 5-state chain directly from the tables."""
    tables = np.asarray(tables, dtype=float)
    K = tables.shape[0]
    found = {}
    for s in range(5):
        here = []
        nxt = [int(round(CHAIN_T(np.array([s / 4]), a)[0] * 4)) for a in (0, 1)]
        for c in range(K):
            v = tables[c, s].max()
            preds = [tables[c, n].max() for n in nxt]
            if max(preds) < v - phi:
                here.append((c, "maximum"))
            elif min(preds) > v + phi:
                here.append((c, "minimum"))
        v = tables[:, s, :].sum(axis=0).max()
        preds = [tables[:, n, :].sum(axis=0).max() for n in nxt]
        if max(preds) < v - phi:
            here.append(("aggregate", "maximum"))
        elif min(preds) > v + phi:
            here.append(("aggregate", "minimum"))
        found[s] = sorted(here, key=str)
    return found


def test_constant_q_has_no_extrema():
    q_batch = lambda states: np.full((2, len(states), 2), 3.7)
    model = TruePredictor(CHAIN_T)
    for phi in (0.0, 0.1, 1.0):
        result = detect_extrema(q_batch, model, np.array([0.5]), phi, n_actions=2)
        assert result.suppressed is False
        assert result.dines == []


def test_phi_above_value_range_suppresses_all():
    rng = np.random.default_rng(5)
    tables = rng.uniform(-1, 1, size=(2, 5, 2))
    q_batch = q_table_fns(tables)
    model = TruePredictor(CHAIN_T)
    phi = 10.0  # larger than the whole Q range
    for s in range(5):
        result = detect_extrema(q_batch, model, np.array([s / 4]), phi, n_actions=2)
        assert result.dines == []


def test_chain_extrema_match_brute_force_oracle():
    # hand-set tables with a bump at state 2 for channel 0 and a dip at 1 for channel 1
    tables = np.array([
        [[0.0, 0.1], [0.5, 0.6], [2.0, 1.9], [0.4, 0.3], [0.0, 0.2]],
        [[1.0, 1.1], [-1.0, -0.9], [0.3, 0.2], [0.5, 0.6], [0.9, 1.0]],
    ])
    q_batch = q_table_fns(tables)
    model = TruePredictor(CHAIN_T)
    for phi in (0.0, 0.1, 0.5, 1.0):
        oracle = brute_force_extrema(tables, phi)
        for s in range(5):
            result = detect_extrema(q_batch, model, np.array([s / 4]), phi, n_actions=2)
            got = sorted(((d.scope, d.kind) for d in result.dines), key=str)
            assert got == oracle[s], f"state {s}, phi {phi}"


def test_extremum_dines_satisfy_their_invariant():
    rng = np.random.default_rng(6)
    tables = rng.uniform(-2, 2, size=(3, 5, 2))
    q_batch = q_table_fns(tables)
    model = TruePredictor(CHAIN_T)
    phi = 0.05
    for s in range(5):
        for d in detect_extrema(q_batch, model, np.array([s / 4]), phi, n_actions=2).dines:
            preds = np.array(d.predicted_next_values)
            if d.kind == "maximum":
                assert np.all(preds < d.state_value - phi)
            else:
                assert np.all(preds > d.state_value + phi)


def test_extrema_sets_shrink_as_phi_grows():
    rng = np.random.default_rng(7)
    tables = rng.uniform(-2, 2, size=(2, 5, 2))
    q_batch = q_table_fns(tables)
    basis = compute_extremum_basis(q_batch, TruePredictor(CHAIN_T).predict,
                                   np.array([0.5]), n_actions=2)
    grid = [0.0, 0.05, 0.1, 0.2, 0.5]
    sets = [{(d.scope, d.kind) for d in threshold_extrema(basis, phi)} for phi in grid]
    for bigger, smaller in zip(sets, sets[1:]):
        assert smaller <= bigger


def test_basis_state_values_match_q_snapshot():
    rng = np.random.default_rng(8)
    tables = rng.uniform(-1, 1, size=(2, 5, 3))

    def q_batch(states):
        idx = np.rint(np.asarray(states)[:, 0] * 4).astype(int)
        return tables[:, idx, :]

    predict = lambda s, a: np.array([min(max(s[0] + 0.25 * (a - 1), 0.0), 1.0)])
    basis = compute_extremum_basis(q_batch, predict, np.array([0.5]), n_actions=3)
    assert basis.scopes[0].state_value == tables[0, 2].max()
    assert basis.scopes[1].state_value == tables[1, 2].max()
    assert basis.scopes[2].scope == "aggregate"
    assert basis.scopes[2].state_value == tables[:, 2, :].sum(axis=0).max()
    assert len(basis.scopes[0].predicted_next_values) == 3
