import json

import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from conftest import synthetic_trace
from dinelab.cli import cli
from dinelab.dines.detect import detect_uncertain, dominance
from dinelab.dines.text import render_counterfactual
from dinelab.service import ServingState, create_app
from dinelab.trace.io import import_trace
from dinelab.trace.store import refilter, standardize


@pytest.fixture
def client():
    trace = synthetic_trace(n=50, seed=11)
    state = ServingState(trace)
    return TestClient(create_app(state)), trace


def test_meta_endpoint(client):
    api, trace = client
    body = api.get("/api/meta").json()
    assert body["channel_names"] == list(trace.meta.channel_names)
    assert body["action_names"] == list(trace.meta.action_names)
    assert body["weights"] == [4.0, 2.0, 1.0]
    assert body["n_channels"] == 3 and body["n_actions"] == 5
    assert body["trace_length"] == 50
    assert body["thresholds"] == {"rho": 0.3, "phi": 0.1}


def test_trace_endpoint_window_and_standardization(client):
    api, trace = client
    body = api.get("/api/trace", params={"from": 10, "to": 19}).json()
    assert body["timesteps"] == list(range(10, 20))
    records = trace.window(10, 19)
    view = standardize(records, trace.meta.state_var_names)
    for i in range(len(trace.meta.state_var_names)):
        assert body["state"]["raw"][i] == [r.raw_state[i] for r in records]
        assert body["state"]["standardized"][i] == pytest.approx(view.z[:, i].tolist(), abs=0)
    assert body["actions"] == [r.action for r in records]
    assert body["exploratory"] == [r.exploratory for r in records]


def test_trace_endpoint_served_values_are_exact(client):
    api, trace = client
    body = api.get("/api/trace").json()
    # full float precision through JSON
    assert body["rewards"][2][17] == trace.records[17].reward[2]
    assert body["epsilon"][33] == trace.records[33].epsilon_at_step


def test_dominance_endpoint(client):
    api, trace = client
    body = api.get("/api/dominance/7").json()
    chart = dominance(trace.records[7].q_values, trace.records[7].action, timestep=7)
    assert body["absolute"] == chart.absolute.tolist()
    assert body["relative"] == chart.relative.tolist()
    assert body["chosen_action"] == chart.chosen_action
    assert body["dominant_channel"] == chart.dominant_channel


def test_unknown_timestep_is_404(client):
    api, _ = client
    resp = api.get("/api/dominance/999")
    assert resp.status_code == 404
    assert "999" in resp.json()["error"]
    assert api.get("/api/counterfactual/999").status_code == 404


def test_dines_endpoint_matches_refilter_exactly(client):
    api, trace = client
    for params in ({}, {"rho": 0.1, "phi": 0.02}, {"rho": 0.7, "phi": 0.3, "from": 5, "to": 30}):
        body = api.get("/api/dines", params=params).json()
        expected = refilter(trace,
                            rho=params.get("rho", 0.3), phi=params.get("phi", 0.1),
                            from_t=params.get("from"), to_t=params.get("to"))
        assert body["uncertain"] == [d.as_dict() for d in expected.uncertain]
        assert body["extrema"] == [d.as_dict() for d in expected.extrema]
        assert body["counts"] == {"uncertain": len(expected.uncertain),
                                  "extrema": len(expected.extrema)}


def test_counterfactual_endpoint(client):
    api, trace = client
    rho = 0.3
    target = None
    for r in trace.records:
        if detect_uncertain(r.q_values, r.action, rho, timestep=r.timestep):
            target = r
            break
    assert target is not None
    body = api.get(f"/api/counterfactual/{target.timestep}").json()
    dine = detect_uncertain(target.q_values, target.action, rho, timestep=target.timestep)
    chart = dominance(target.q_values, target.action, timestep=target.timestep)
    assert body["text"] == render_counterfactual(dine, chart, trace.meta.channel_names,
                                                 trace.meta.action_names)
    # a timestep with no uncertain dine at rho=1 answers with empty text
    none_body = api.get(f"/api/counterfactual/{target.timestep}", params={"rho": 1.0}).json()
    if detect_uncertain(target.q_values, target.action, 1.0) is None:
        assert none_body["text"] == ""


def test_thresholds_post_returns_previous_and_affects_defaults(client):
    api, trace = client
    before = api.get("/api/dines").json()
    resp = api.post("/api/thresholds", json={"rho": 0.9, "phi": 0.4})
    assert resp.json() == {"rho": 0.3, "phi": 0.1}
    after_meta = api.get("/api/meta").json()
    assert after_meta["thresholds"] == {"rho": 0.9, "phi": 0.4}
    after = api.get("/api/dines").json()
    expected = refilter(trace, 0.9, 0.4)
    assert after["counts"]["uncertain"] == len(expected.uncertain)
    assert after["counts"]["uncertain"] <= before["counts"]["uncertain"]
    # restore
    api.post("/api/thresholds", json={"rho": 0.3, "phi": 0.1})


def test_malformed_parameters_list_fields(client):
    api, _ = client
    resp = api.get("/api/dines", params={"rho": 1.5})
    assert resp.status_code == 400
    assert "rho" in resp.json()["fields"]
    resp = api.get("/api/dines", params={"phi": -1})
    assert resp.status_code == 400
    assert "phi" in resp.json()["fields"]
    resp = api.get("/api/trace", params={"from": "abc"})
    assert resp.status_code == 400
    assert any("from" in f for f in resp.json()["fields"])
    resp = api.get("/api/trace", params={"from": 9, "to": 2})
    assert resp.status_code == 400
    resp = api.post("/api/thresholds", json={"rho": 2.0, "phi": 0.1})
    assert resp.status_code == 400


def test_gets_are_idempotent(client):
    api, _ = client
    for path, params in (("/api/meta", {}), ("/api/trace", {"from": 0, "to": 20}),
                         ("/api/dominance/3", {}), ("/api/dines", {"rho": 0.2})):
        first = api.get(path, params=params).json()
        second = api.get(path, params=params).json()
        assert first == second


# ---- CLI -----------------------------------------------------------------------

def write_config(path, text):
    path.write_text(text)
    return str(path)


def test_train_seed_fixed_runs_are_byte_identical(tmp_path):
    runner = CliRunner()
    out1, out2 = tmp_path / "a.trace", tmp_path / "b.trace"
    for out in (out1, out2):
        result = runner.invoke(cli, ["train", "--steps", "100", "--seed", "7",
                                     "--trace", str(out)])
        assert result.exit_code == 0, result.output
    assert out1.read_bytes() == out2.read_bytes()
    assert len(import_trace(str(out1))) == 100


def test_train_rejects_zero_steps(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["train", "--steps", "0", "--trace", str(tmp_path / "x.trace")])
    assert result.exit_code == 1


def test_train_missing_config_file(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["train", "--steps", "5", "--config",
                                 str(tmp_path / "nope.yaml"), "--trace", str(tmp_path / "x.trace")])
    assert result.exit_code == 1


def test_train_rejects_unknown_config_keys(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", "reward:\n  weight_user_satisfaction: 4\n  bogus_key: 1\n")
    runner = CliRunner()
    result = runner.invoke(cli, ["train", "--steps", "5", "--config", cfg,
                                 "--trace", str(tmp_path / "x.trace")])
    assert result.exit_code == 1
    assert "bogus_key" in result.output


def test_train_gridworld_reports_mean_return(tmp_path):
    cfg = write_config(tmp_path / "g.yaml", "\n".join([
        "environment: gridworld",
        "agent:",
        "  epsilon_decay_steps: 200",
        "  hidden_layers: [16]",
        "env_model:",
        "  retrain_interval: 100000",
    ]))
    runner = CliRunner()
    result = runner.invoke(cli, ["train", "--steps", "400", "--seed", "1", "--config", cfg,
                                 "--trace", str(tmp_path / "g.trace")])
    assert result.exit_code == 0, result.output
    assert "mean episode return" in result.output


def test_sweep_counts_monotone_and_row_count(tmp_path):
    runner = CliRunner()
    trace_path = tmp_path / "s.trace"
    result = runner.invoke(cli, ["sweep", "--steps", "300", "--seed", "3",
                                 "--trace", str(trace_path),
                                 "--rho-grid", "0:0.25:1", "--phi-grid", "0:0.1:0.3"])
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert lines[0] == "kind,threshold,count,rate"
    rows = [line.split(",") for line in lines[1:]]
    uncertain = [(float(t), int(c)) for kind, t, c, _ in rows if kind == "uncertain"]
    extremum = [(float(t), int(c)) for kind, t, c, _ in rows if kind == "extremum"]
    assert len(uncertain) == 5 and len(extremum) == 4
    assert all(a[1] >= b[1] for a, b in zip(uncertain, uncertain[1:]))
    assert all(a[1] >= b[1] for a, b in zip(extremum, extremum[1:]))
    assert uncertain[0][1] == max(c for _, c in uncertain)
    # the sweep saved the produced trace for reuse
    assert trace_path.exists()
    rerun = runner.invoke(cli, ["sweep", "--trace", str(trace_path),
                                "--rho-grid", "0:0.25:1", "--phi-grid", "0:0.1:0.3"])
    assert rerun.output == result.output


def test_export_window(tmp_path):
    runner = CliRunner()
    src = tmp_path / "full.trace"
    result = runner.invoke(cli, ["train", "--steps", "50", "--seed", "2", "--trace", str(src)])
    assert result.exit_code == 0, result.output
    dst = tmp_path / "window.trace"
    result = runner.invoke(cli, ["export", "--trace", str(src), "--out", str(dst),
                                 "--from", "10", "--to", "19"])
    assert result.exit_code == 0, result.output
    window = import_trace(str(dst))
    assert [r.timestep for r in window.records] == list(range(10, 20))
    full = import_trace(str(src))
    assert np.array_equal(window.records[0].q_values, full.records[10].q_values)


def test_serve_missing_trace_is_config_error(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["serve", "--trace", str(tmp_path / "nope.trace")])
    assert result.exit_code == 1


def test_serve_requires_trace_or_live():
    runner = CliRunner()
    result = runner.invoke(cli, ["serve"])
    assert result.exit_code == 1


def test_demo_command_smoke(tmp_path):
    runner = CliRunner()
    out = tmp_path / "demo.trace"
    result = runner.invoke(cli, ["demo", "--steps", "250", "--seed", "0", "--trace", str(out)])
    assert result.exit_code == 0, result.output
    trace = import_trace(str(out))
    assert len(trace) == 250
    assert (tmp_path / "demo.trace.workload.txt").exists()


def test_env_var_override(tmp_path, monkeypatch):
    monkeypatch.setenv("DINELAB_TRAIN_STEPS", "12")
    runner = CliRunner()
    out = tmp_path / "env.trace"
    result = runner.invoke(cli, ["train", "--trace", str(out)], auto_envvar_prefix="DINELAB")
    assert result.exit_code == 0, result.output
    assert len(import_trace(str(out))) == 12


def test_live_serving_appends_and_refilters(tmp_path):
    # run a short live training through the ServingState hook and query it
    from dinelab.config import parse_run_spec
    from dinelab.runner import build_trace_meta, run_training
    from dinelab.trace.store import Trace

    spec = parse_run_spec({"agent": {"epsilon_decay_steps": 50, "hidden_layers": [8]},
                           "env_model": {"retrain_interval": 100000}})
    state = ServingState(Trace(build_trace_meta(spec)))
    api = TestClient(create_app(state))
    assert api.get("/api/meta").json()["trace_length"] == 0
    run_training(spec, steps=40, seed=5, thresholds_fn=state.live_thresholds,
                 record_hook=state.append)
    assert api.get("/api/meta").json()["trace_length"] == 40
    body = api.get("/api/dines", params={"rho": 0.0, "phi": 0.0}).json()
    assert body["counts"]["uncertain"] == len(refilter(state.trace, 0.0, 0.0).uncertain)
