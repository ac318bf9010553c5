import json

import pytest

from careagent.tasks import (
    DuplicateName,
    InvalidSpec,
    TaskRegistry,
    TaskSpec,
    UnknownTask,
    load_manifest,
    render_task_brief,
    render_task_full,
)
from careagent.health.catalog import TASK_SPECS

from conftest import all_task_specs


def google_spec() -> TaskSpec:
    return TASK_SPECS["google_search"]


def dummy_body(args):
    return {"ok": True}


def test_register_and_lookup():
    registry = TaskRegistry()
    registry.register(google_spec(), dummy_body)
    found = registry.lookup("google_search")
    assert found.spec.description.startswith("Uses google to search the internet")


def test_duplicate_name_rejected():
    registry = TaskRegistry()
    registry.register(google_spec(), dummy_body)
    with pytest.raises(DuplicateName):
        registry.register(google_spec(), dummy_body)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(name="Bad_Name"),
        dict(name="9starts_with_digit"),
        dict(inputs=[]),
        dict(inputs=["ok", ""]),
        dict(outputs=[]),
        dict(chat_name=""),
    ],
)
def test_invalid_specs_rejected(kwargs):
    base = dict(
        name="some_task",
        chat_name="SomeTask",
        description="d",
        inputs=["an input"],
        outputs=["an output"],
    )
    base.update(kwargs)
    with pytest.raises(InvalidSpec):
        TaskRegistry().register(TaskSpec(**base), dummy_body)


def test_lookup_unknown_and_case_sensitive():
    registry = TaskRegistry()
    registry.register(google_spec(), dummy_body)
    with pytest.raises(UnknownTask):
        registry.lookup("nonexistent_task")
    with pytest.raises(UnknownTask):
        registry.lookup("Google_Search")


def test_registry_iteration_is_registration_order():
    registry = TaskRegistry()
    registry.register(TASK_SPECS["extract_text"], dummy_body)
    registry.register(google_spec(), dummy_body)
    assert registry.names() == ["extract_text", "google_search"]
    assert [s.name for s in registry.specs()] == ["extract_text", "google_search"]


def test_dependency_must_be_registered():
    registry = TaskRegistry()
    spec = TaskSpec(
        name="dependent_task",
        chat_name="DependentTask",
        description="needs another task",
        inputs=["x"],
        outputs=["y"],
        dependencies=["fetch_weather_data"],
    )
    registry.register(spec, dummy_body)
    with pytest.raises(InvalidSpec):
        registry.specs()


def test_dependencies_render_into_brief():
    spec = TaskSpec(
        name="dependent_task",
        chat_name="DependentTask",
        description="needs another task",
        inputs=["x"],
        outputs=["y"],
        dependencies=["google_search"],
    )
    assert "Dependencies: google_search" in render_task_brief(spec)


def test_brief_contains_paper_output_lines():
    brief = render_task_brief(google_spec())
    assert brief.startswith("**google_search**: Uses google to search the internet")
    assert "This tool have the following outputs:" in brief
    assert "It returns a json object containing key: **url**" in brief
    extract = render_task_brief(TASK_SPECS["extract_text"])
    assert "Extract all the text on the current webpage" in extract


def test_brief_renders_multiple_outputs_in_order():
    spec = TaskSpec(
        name="two_outputs",
        chat_name="TwoOutputs",
        description="d",
        inputs=["in"],
        outputs=["first output", "second output"],
    )
    brief = render_task_brief(spec)
    assert brief.index("first output") < brief.index("second output")


def test_full_rendering_numbered_inputs():
    block = render_task_full(google_spec())
    assert "1-It should be a search query." in block
    assert "The input to this tool should be a list of data representing:" in block


def test_full_rendering_datapipe_sentence_only_when_stored():
    assert render_task_full(TASK_SPECS["affect_ppg_get"]).endswith(
        "The result will be stored in the Data Pipe."
    )
    assert "stored in the Data Pipe" not in render_task_full(google_spec())


def test_full_rendering_input_line_count_matches_arity():
    for spec in all_task_specs():
        block = render_task_full(spec)
        numbered = [
            line for line in block.splitlines()
            if line.strip() and line.strip()[0].isdigit() and "-" in line.strip()[:4]
        ]
        assert len(numbered) == len(spec.inputs), spec.name


def test_rendering_is_deterministic():
    spec = google_spec()
    assert render_task_brief(spec) == render_task_brief(spec)
    assert render_task_full(spec) == render_task_full(spec)


def test_manifest_round_trip(tmp_path):
    manifest = [
        {
            "name": "google_search",
            "chat_name": "GoogleSearch",
            "description": "search the internet",
            "inputs": ["a query"],
            "outputs": ["a url object"],
            "output_type": False,
        }
    ]
    path = tmp_path / "tasks.json"
    path.write_text(json.dumps(manifest))
    registry = load_manifest(path, {"google_search": dummy_body})
    assert "google_search" in registry


def test_manifest_unknown_body(tmp_path):
    manifest = [
        {
            "name": "mystery_task",
            "chat_name": "MysteryTask",
            "description": "no body exists",
            "inputs": ["x"],
            "outputs": ["y"],
        }
    ]
    path = tmp_path / "tasks.json"
    path.write_text(json.dumps(manifest))
    with pytest.raises(UnknownTask):
        load_manifest(path, {})
