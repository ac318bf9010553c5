import json
import socket

import pytest

from careagent.cli import main
from careagent.config import ConfigError, EngineConfig, load_config
from careagent.engine import Engine
from careagent.health import builtin_bodies
from careagent.health.records import HealthDataset
from careagent.health.web import FixtureFetchClient, StubSearchClient
from careagent.service import BindFailure, serve
from careagent.tasks import load_manifest

from conftest import DATA_DIR, FIXTURES_DIR, REPO, sleep_config


def test_load_config_yaml(tmp_path):
    path = tmp_path / "engine.yaml"
    path.write_text(
        "backend: scripted\n"
        f"fixture_path: {FIXTURES_DIR / 'llm' / 'sleep_advice.json'}\n"
        f"data_dir: {DATA_DIR}\n"
        f"fixtures_dir: {FIXTURES_DIR}\n"
        "max_iterations: 2\n"
        "planner_llm:\n  model: m1\n  temperature: 0.1\n"
    )
    config = load_config(path)
    assert config.max_iterations == 2
    assert config.planner_llm.model == "m1"
    assert config.responder_llm.temperature == 0.7  # default preserved


def test_relative_paths_resolve_against_config_dir():
    config = load_config(REPO / "configs" / "demo_sleep.yaml")
    assert config.data_dir == str(REPO / "data")
    assert config.fixture_path == str(REPO / "fixtures" / "llm" / "sleep_advice.json")


def test_env_overrides_credentials(tmp_path, monkeypatch):
    monkeypatch.setenv("CAREAGENT_API_KEY", "sk-from-env")
    monkeypatch.setenv("CAREAGENT_BASE_URL", "https://env.example.com")
    path = tmp_path / "engine.yaml"
    path.write_text("backend: remote\nremote_base_url: https://file.example.com\n")
    config = load_config(path)
    assert config.remote_api_key == "sk-from-env"
    assert config.remote_base_url == "https://env.example.com"


@pytest.mark.parametrize(
    "overrides",
    [
        dict(strategy="chain_of_command"),
        dict(max_iterations=0),
        dict(lang_mode="mirror"),
        dict(backend="scripted", fixture_path=None),
        dict(backend="remote", remote_base_url=None),
        dict(languages=["es"]),
    ],
)
def test_config_validation(overrides):
    values = dict(backend="scripted", fixture_path="f.json")
    values.update(overrides)
    with pytest.raises(ConfigError):
        EngineConfig(**values).validate()


def test_unknown_config_keys_rejected(tmp_path):
    path = tmp_path / "engine.yaml"
    path.write_text("backend: scripted\nfixture_path: f\nmystery_toggle: true\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_enabling_unknown_task_is_config_error():
    with pytest.raises(ConfigError) as err:
        Engine(sleep_config(enabled_tasks=["google_search", "levitation_task"]))
    assert "levitation_task" in str(err.value)


def test_serve_bind_failure():
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    try:
        with pytest.raises(BindFailure):
            serve(sleep_config(port=port))
    finally:
        probe.close()


def test_manifest_mirrors_catalog():
    dataset = HealthDataset(DATA_DIR)
    bodies = builtin_bodies(
        dataset,
        StubSearchClient(FIXTURES_DIR / "search.map"),
        FixtureFetchClient(FIXTURES_DIR / "www"),
    )
    registry = load_manifest(REPO / "manifests" / "demo_tasks.json", bodies)
    engine_registry = Engine(sleep_config(enabled_tasks=None)).registry
    assert registry.names() == engine_registry.names()
    for name in registry.names():
        assert registry.lookup(name).spec == engine_registry.lookup(name).spec


def test_cli_tasks_list(capsys):
    code = main(["tasks", "list", "--config", str(REPO / "configs" / "demo_stress.yaml")])
    assert code == 0
    out = capsys.readouterr().out
    assert "google_search (GoogleSearch)" in out
    assert "affect_ppg_get (PpgGet) [datapipe]" in out


def test_cli_tasks_list_json(capsys):
    code = main([
        "tasks", "list", "--config", str(REPO / "configs" / "demo_sleep.yaml"), "--json",
    ])
    assert code == 0
    parsed = json.loads(capsys.readouterr().out)
    assert [t["name"] for t in parsed] == ["google_search", "extract_text"]


def test_cli_replay_pass(capsys):
    code = main([
        "replay",
        "--fixture", str(FIXTURES_DIR / "llm" / "sleep_advice.json"),
        "--golden", str(FIXTURES_DIR / "replay" / "sleep_golden.json"),
    ])
    assert code == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_replay_failure_exit_code(tmp_path, capsys):
    golden = json.loads((FIXTURES_DIR / "replay" / "sleep_golden.json").read_text())
    golden["expected_answer"] = "something entirely different"
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden))
    code = main([
        "replay",
        "--fixture", str(FIXTURES_DIR / "llm" / "sleep_advice.json"),
        "--golden", str(path),
    ])
    assert code == 1
    assert "FAIL at answer" in capsys.readouterr().out


def test_cli_error_reporting(capsys):
    code = main(["tasks", "list", "--config", "/nonexistent/config.yaml"])
    assert code == 2
    assert "error:" in capsys.readouterr().err
