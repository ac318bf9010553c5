"""Deterministic replay harness: run a scripted fixture end to end and diff
the produced prompts, plans, and answer against a golden transcript."""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .config import EngineConfig, config_from_dict
from .engine import Engine
from .errors import AgentError


class FixtureError(AgentError):
    pass


@dataclass
class ReplayReport:
    passed: bool
    divergence: str | None = None
    detail: str = ""
    answer: str = ""
    tasks_used: list[str] = field(default_factory=list)

    def summary(self) -> str:
        if self.passed:
            return "PASS"
        return f"FAIL at {self.divergence}\n{self.detail}"


def _diff(expected: str, actual: str) -> str:
    lines = difflib.unified_diff(
        expected.splitlines(), actual.splitlines(),
        fromfile="golden", tofile="replay", lineterm="",
    )
    return "\n".join(lines)


def _first_divergence(kind: str, expected: list[str], actual: list[str]) -> tuple[str, str] | None:
    if len(expected) != len(actual):
        return (f"{kind} count", f"golden has {len(expected)}, replay produced {len(actual)}")
    for i, (want, got) in enumerate(zip(expected, actual)):
        if want != got:
            return (f"{kind}[{i}]", _diff(want, got))
    return None


def replay(fixture_path: str | Path, golden_path: str | Path,
           config: EngineConfig | None = None) -> ReplayReport:
    """Drive one scripted query and compare against the golden transcript.

    The golden file is JSON with: query, optional language and config
    overrides, and expected prompts / plans / answer / tasks_used captured
    from a verified run.
    """
    fixture_path = Path(fixture_path)
    golden_path = Path(golden_path)
    if not fixture_path.is_file():
        raise FixtureError(f"fixture file {fixture_path} does not exist")
    if not golden_path.is_file():
        raise FixtureError(f"golden transcript {golden_path} does not exist")
    try:
        golden = json.loads(golden_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise FixtureError(f"golden transcript {golden_path} is not valid JSON: {exc}") from exc

    overrides = dict(golden.get("config", {}))
    overrides["backend"] = "scripted"
    overrides["fixture_path"] = str(fixture_path)
    config = config_from_dict(overrides) if config is None else config
    if config.fixture_path != str(fixture_path):
        config.fixture_path = str(fixture_path)

    engine = Engine(config)
    session = engine.create_session(language=golden.get("language"))
    result = engine.respond(session.session_id, golden["query"])
    trace = engine.trace(session.session_id, result["turn_id"])

    produced_prompts: list[str] = []
    for turn in trace["planner_turns"]:
        produced_prompts.append(turn["stage1_prompt"])
        if turn.get("stage2_prompt"):
            produced_prompts.append(turn["stage2_prompt"])
    if trace.get("thinker_prompt"):
        produced_prompts.append(trace["thinker_prompt"])
    produced_plans = [
        t["plan_source"] for t in trace["planner_turns"] if t.get("plan_source") is not None
    ]

    checks = [
        ("prompt", golden.get("expected_prompts"), produced_prompts),
        ("plan", golden.get("expected_plans"), produced_plans),
    ]
    for kind, expected, actual in checks:
        if expected is None:
            continue
        divergence = _first_divergence(kind, expected, actual)
        if divergence:
            return ReplayReport(False, divergence[0], divergence[1],
                                answer=result["answer"], tasks_used=result["tasks_used"])
    if "expected_answer" in golden and golden["expected_answer"] != result["answer"]:
        return ReplayReport(False, "answer", _diff(golden["expected_answer"], result["answer"]),
                            answer=result["answer"], tasks_used=result["tasks_used"])
    if "expected_tasks_used" in golden and golden["expected_tasks_used"] != result["tasks_used"]:
        return ReplayReport(
            False, "tasks_used",
            f"golden {golden['expected_tasks_used']}, replay {result['tasks_used']}",
            answer=result["answer"], tasks_used=result["tasks_used"],
        )
    return ReplayReport(True, answer=result["answer"], tasks_used=result["tasks_used"])


def capture_transcript(fixture_path: str | Path, query: str,
                       config: EngineConfig, language: str | None = None) -> dict[str, Any]:
    """Produce a golden transcript dict from a live scripted run (authoring aid)."""
    config.backend = "scripted"
    config.fixture_path = str(fixture_path)
    engine = Engine(config)
    session = engine.create_session(language=language)
    result = engine.respond(session.session_id, query)
    trace = engine.trace(session.session_id, result["turn_id"])
    prompts: list[str] = []
    for turn in trace["planner_turns"]:
        prompts.append(turn["stage1_prompt"])
        if turn.get("stage2_prompt"):
            prompts.append(turn["stage2_prompt"])
    if trace.get("thinker_prompt"):
        prompts.append(trace["thinker_prompt"])
    return {
        "query": query,
        "language": language,
        "expected_prompts": prompts,
        "expected_plans": [
            t["plan_source"] for t in trace["planner_turns"] if t.get("plan_source") is not None
        ],
        "expected_answer": result["answer"],
        "expected_tasks_used": result["tasks_used"],
    }
