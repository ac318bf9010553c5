import pytest

from careagent.llm import CompletionParams, FixtureEntry, ScriptedBackend, ScriptedFixture
from careagent.planlang import TaskCall
from careagent.planner import (
    FINISHED,
    MissingDecisionMarker,
    PLAN_PRODUCED,
    PlannerContext,
    PlanParseFailed,
    ReactPlanner,
    TreeOfThoughtPlanner,
    build_react_prompt,
    detect_finish,
    extract_decision,
    make_planner,
)
from careagent.health.catalog import TASK_SPECS

SCENARIO2_OUTPUT = """Strategy 1 ... Strategy 2 ... Strategy 3 ...

Decision:

I will proceed to directly analyze the REM sleep data of Patient 5 for August 2020, providing a precise and specific conclusion.

Execution:
1. Use the affect_sleep_get tool to obtain the REM sleep data for Patient 5 in August 2020.
2. Utilize the affect_analysis tool to analyze the REM sleep duration and efficiency for August 2020."""


def web_specs():
    return [TASK_SPECS["google_search"], TASK_SPECS["extract_text"]]


def ctx(**overrides) -> PlannerContext:
    values = dict(specs=web_specs(), question="How to improve my sleep?")
    values.update(overrides)
    return PlannerContext(**values)


def backend(entries) -> ScriptedBackend:
    return ScriptedBackend(ScriptedFixture([FixtureEntry(*e) for e in entries]))


def test_extract_decision_rem_sleep_sample():
    decision = extract_decision(SCENARIO2_OUTPUT)
    assert decision.startswith("I will proceed to directly analyze the REM sleep data")


def test_extract_decision_uses_last_marker():
    text = "I quote the instruction Decision: here.\nDecision: the real one"
    assert extract_decision(text) == "the real one"


def test_extract_decision_missing():
    with pytest.raises(MissingDecisionMarker):
        extract_decision("no marker anywhere")


def test_detect_finish():
    assert detect_finish("Final Answer: all done") == "all done"
    assert detect_finish("Thought: hmm\nFinal Answer: yes\nmore") == "yes\nmore"
    assert detect_finish("the words Final Answer mid-sentence") is None


def test_context_requires_question():
    with pytest.raises(Exception):
        PlannerContext(specs=web_specs(), question="")


STAGE1_REPLY = """Three strategies...

Decision:

Search and extract.

1. google_search for tips. 2. extract_text on the url."""

GOOD_CODE_REPLY = """```python
search_query = "tips to improve sleep"
search_result = self.execute_task('google_search', [search_query])
url = search_result['url']
text = self.execute_task('extract_text', [url])
```"""

BAD_CODE_REPLY = "```python\nfor url in urls:\n    fetch(url)\n```"


def tot(registry, entries) -> tuple[TreeOfThoughtPlanner, ScriptedBackend]:
    llm = backend(entries)
    return TreeOfThoughtPlanner(registry, llm, CompletionParams()), llm


def test_plan_turn_produces_validated_plan(web_registry):
    planner, llm = tot(web_registry, [
        ("substring", "suggest three creative strategies", STAGE1_REPLY),
        ("substring", "skilled Python programmer", GOOD_CODE_REPLY),
    ])
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == PLAN_PRODUCED
    assert outcome.plan.validated
    assert len(outcome.plan.steps) == 4
    assert outcome.decision.startswith("Search and extract.")
    assert len(llm.calls) == 2


def test_plan_turn_finish_branch(web_registry):
    planner, llm = tot(web_registry, [
        ("substring", "suggest three creative strategies",
         "Final Answer: everything needed is already gathered"),
    ])
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == FINISHED
    assert outcome.final_text == "everything needed is already gathered"
    assert len(llm.calls) == 1


def test_plan_turn_repairs_once(web_registry):
    planner, llm = tot(web_registry, [
        ("substring", "The previous reply could not be executed", GOOD_CODE_REPLY),
        ("substring", "suggest three creative strategies", STAGE1_REPLY),
        ("substring", "skilled Python programmer", BAD_CODE_REPLY),
    ])
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == PLAN_PRODUCED
    assert len(llm.calls) == 3  # stage 1, bad stage 2, repaired stage 2


def test_plan_turn_fails_after_repair_budget(web_registry):
    planner, llm = tot(web_registry, [
        ("substring", "suggest three creative strategies", STAGE1_REPLY),
        ("substring", "skilled Python programmer", BAD_CODE_REPLY),
        ("substring", "The previous reply could not be executed", BAD_CODE_REPLY),
    ])
    with pytest.raises(PlanParseFailed):
        planner.plan_turn(ctx())
    assert len(llm.calls) == 3  # never more than 2 + repair budget


def test_missing_decision_marker_propagates(web_registry):
    planner, _ = tot(web_registry, [
        ("substring", "suggest three creative strategies", "strategies but no marker"),
    ])
    with pytest.raises(MissingDecisionMarker):
        planner.plan_turn(ctx())


def test_make_planner_strategy_names(web_registry):
    llm = backend([])
    assert isinstance(make_planner("tot", web_registry, llm), TreeOfThoughtPlanner)
    assert isinstance(make_planner("react", web_registry, llm), ReactPlanner)
    with pytest.raises(Exception):
        make_planner("plan_and_solve", web_registry, llm)


# -- reason-and-act strategy -----------------------------------------------------


def test_react_prompt_contains_format_and_scratchpad():
    prompt = build_react_prompt(ctx(action_triples=[
        ("google_search", "['tips to improve sleep']", "{'url': 'x'}"),
    ]))
    assert "Use the following format:" in prompt
    assert "Action: google_search" in prompt
    assert "Observation: {'url': 'x'}" in prompt
    assert prompt.endswith("Thought:")


def test_react_single_step_plan(web_registry):
    planner = ReactPlanner(web_registry, backend([
        ("substring", "Use the following format",
         "Thought: search first\nAction: google_search\nAction Input: ['tips to improve sleep']"),
    ]))
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == PLAN_PRODUCED
    steps = outcome.plan.steps
    assert len(steps) == 1
    assert isinstance(steps[0].action, TaskCall)
    assert steps[0].action.task == "google_search"


def test_react_immediate_final_answer(web_registry):
    planner = ReactPlanner(web_registry, backend([
        ("substring", "Use the following format", "Final Answer: sleep seven hours"),
    ]))
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == FINISHED
    assert outcome.plan is None


def test_react_unknown_task_reprompted_once(web_registry):
    llm = backend([
        ("substring", "Your previous reply was invalid",
         "Action: google_search\nAction Input: ['ok']"),
        ("substring", "Use the following format",
         "Action: not_a_task\nAction Input: ['x']"),
    ])
    planner = ReactPlanner(web_registry, llm)
    outcome = planner.plan_turn(ctx())
    assert outcome.kind == PLAN_PRODUCED
    assert outcome.plan.steps[0].action.task == "google_search"
    assert len(llm.calls) == 2


def test_react_gives_up_after_repair(web_registry):
    llm = backend([
        ("substring", "Use the following format", "no action at all"),
        ("substring", "Your previous reply was invalid", "still no action"),
    ])
    with pytest.raises(PlanParseFailed):
        ReactPlanner(web_registry, llm).plan_turn(ctx())
    assert len(llm.calls) == 2
