import pytest

from dinelab.config import ConfigError, load_run_spec, parse_run_spec


def test_defaults_round_out_missing_sections():
    spec = parse_run_spec({})
    assert spec.environment == "swim"
    assert spec.reward.weights == (4.0, 2.0, 1.0)
    assert spec.agent.hidden_layers == (64, 64)
    assert spec.dines.rho == 0.3 and spec.dines.phi == 0.1


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_run_spec({"rewards": {}})


def test_unknown_key_rejected_with_path():
    with pytest.raises(ConfigError, match=r"queue: unknown key.*boot_dely"):
        parse_run_spec({"queue": {"boot_dely": 2}})


def test_invalid_value_carries_section():
    with pytest.raises(ConfigError, match="agent"):
        parse_run_spec({"agent": {"discount": 1.5}})


def test_unknown_environment_rejected():
    with pytest.raises(ConfigError, match="environment"):
        parse_run_spec({"environment": "mars"})


def test_digest_depends_on_values():
    a = parse_run_spec({"reward": {"tau": 60.0}})
    b = parse_run_spec({"reward": {"tau": 61.0}})
    c = parse_run_spec({"reward": {"tau": 60.0}})
    assert a.digest == c.digest
    assert a.digest != b.digest


def test_load_from_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("\n".join([
        "environment: gridworld",
        "agent:",
        "  hidden_layers: [32, 16]",
        "  learning_rate: 0.01",
        "dines:",
        "  rho: 0.5",
    ]))
    spec = load_run_spec(str(path))
    assert spec.environment == "gridworld"
    assert spec.agent.hidden_layers == (32, 16)
    assert spec.dines.rho == 0.5


def test_load_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_run_spec("/nonexistent/run.yaml")


def test_non_mapping_yaml_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_run_spec(str(path))
