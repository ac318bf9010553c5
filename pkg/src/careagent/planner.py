"""LLM-driven task planning.

The default strategy is the two-stage tree-of-thought flow: stage 1 asks
for three candidate strategies with pros and cons plus a final decision;
stage 2 turns that decision into restricted plan code, which is parsed and
validated before anything runs. A single-prompt reason-and-act strategy
(one task call per planning turn) is available as a drop-in alternative.

A planning turn either produces a validated plan or signals that the
gathered information suffices (a reply line starting with
``Final Answer:``). Stage-2 output that fails to parse gets exactly one
repair re-prompt carrying the error text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import prompts
from .errors import AgentError
from .llm import Backend, ChatMessage, CompletionParams
from .planlang import (
    Plan,
    PlanError,
    PlanStep,
    StringLiteral,
    TaskCall,
    extract_code_block,
    parse_plan,
    parse_string_list,
    validate_plan,
)
from .tasks import TaskRegistry, TaskSpec

DECISION_MARKER = "Decision:"
FINISH_RE = re.compile(r"(?m)^[ \t]*Final Answer:[ \t]*")
ACTION_RE = re.compile(r"(?m)^[ \t]*Action:[ \t]*(.+)$")
ACTION_INPUT_RE = re.compile(r"(?m)^[ \t]*Action Input:[ \t]*(.+)$")

PLAN_PRODUCED = "plan"
FINISHED = "finish"


class PlannerError(AgentError):
    pass


class MissingDecisionMarker(PlannerError):
    pass


class PlanParseFailed(PlannerError):
    def __init__(self, error: Exception):
        super().__init__(f"planner output could not be turned into a plan: {error}")
        self.last_error = error


@dataclass
class PlannerContext:
    """Everything the planner sees for one planning turn."""

    specs: list[TaskSpec]
    question: str
    metadata: list[str] = field(default_factory=list)  # one-line descriptors
    history: str = ""
    previous_actions: str = ""  # pre-formatted action blocks
    # (task_name, inputs display, output display) triples; feeds the
    # reason-and-act scratchpad, which needs line-oriented structure
    action_triples: list[tuple[str, str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.question:
            raise PlannerError("planner context needs a non-empty question")

    def metadata_text(self) -> str:
        return "\n".join(self.metadata)


@dataclass
class PlannerOutcome:
    kind: str  # PLAN_PRODUCED | FINISHED
    raw_stage1: str
    plan: Plan | None = None
    decision: str | None = None
    final_text: str | None = None
    raw_stage2: str | None = None
    stage1_prompt: str = ""
    stage2_prompt: str | None = None

    @property
    def finished(self) -> bool:
        return self.kind == FINISHED


def build_stage1_prompt(ctx: PlannerContext) -> str:
    return prompts.get_template("planner.stage1").format(
        task_blocks=prompts.stage1_task_blocks(ctx.specs),
        metadata=ctx.metadata_text(),
        history=ctx.history,
        previous_actions=ctx.previous_actions,
        section_rule=prompts.SECTION_RULE,
        question=ctx.question,
    )


def extract_decision(stage1_output: str) -> str:
    """Text after the last ``Decision:`` marker, trimmed."""
    position = stage1_output.rfind(DECISION_MARKER)
    if position < 0:
        raise MissingDecisionMarker(
            f"stage-1 output does not contain the {DECISION_MARKER!r} marker"
        )
    return stage1_output[position + len(DECISION_MARKER):].strip()


def build_stage2_prompt(decision: str, ctx: PlannerContext) -> str:
    if not decision:
        raise PlannerError("stage-2 prompt needs a non-empty decision")
    return prompts.get_template("planner.stage2").format(
        decision=decision,
        task_blocks=prompts.stage2_task_blocks(ctx.specs),
        section_rule=prompts.SECTION_RULE,
        question=ctx.question,
    )


def detect_finish(output: str) -> str | None:
    """Directive text when a reply line starts with the finish marker."""
    m = FINISH_RE.search(output)
    if m is None:
        return None
    return output[m.end():].strip()


class TreeOfThoughtPlanner:
    """Two-stage strategy: decide, then generate plan code."""

    def __init__(
        self,
        registry: TaskRegistry,
        llm: Backend,
        params: CompletionParams | None = None,
        repair_budget: int = 1,
    ):
        self.registry = registry
        self.llm = llm
        self.params = params or CompletionParams(temperature=0.0)
        self.repair_budget = repair_budget

    def _complete(self, prompt: str) -> str:
        return self.llm.complete([ChatMessage("user", prompt)], self.params)

    def plan_turn(self, ctx: PlannerContext) -> PlannerOutcome:
        stage1_prompt = build_stage1_prompt(ctx)
        stage1_output = self._complete(stage1_prompt)
        final_text = detect_finish(stage1_output)
        if final_text is not None:
            return PlannerOutcome(
                kind=FINISHED,
                raw_stage1=stage1_output,
                final_text=final_text,
                stage1_prompt=stage1_prompt,
            )
        decision = extract_decision(stage1_output)
        stage2_prompt = build_stage2_prompt(decision, ctx)
        prompt = stage2_prompt
        last_error: Exception | None = None
        for _ in range(self.repair_budget + 1):
            stage2_output = self._complete(prompt)
            try:
                code = extract_code_block(stage2_output)
                plan = validate_plan(parse_plan(code), self.registry)
                return PlannerOutcome(
                    kind=PLAN_PRODUCED,
                    raw_stage1=stage1_output,
                    plan=plan,
                    decision=decision,
                    raw_stage2=stage2_output,
                    stage1_prompt=stage1_prompt,
                    stage2_prompt=prompt,
                )
            except PlanError as exc:
                last_error = exc
                prompt = prompts.get_template("planner.stage2_repair").format(
                    stage2_prompt=stage2_prompt, error=exc
                )
        raise PlanParseFailed(last_error)


def build_react_prompt(ctx: PlannerContext) -> str:
    return prompts.get_template("planner.react").format(
        task_blocks=prompts.stage1_task_blocks(ctx.specs),
        task_names=", ".join(s.name for s in ctx.specs),
        metadata=ctx.metadata_text(),
        history=ctx.history,
        question=ctx.question,
        scratchpad=_react_scratchpad(ctx),
    )


def _react_scratchpad(ctx: PlannerContext) -> str:
    lines = []
    for task_name, inputs, output in ctx.action_triples:
        lines.append(f"Action: {task_name}")
        lines.append(f"Action Input: {inputs}")
        lines.append(f"Observation: {output}")
    lines.append("Thought:")
    return "\n".join(lines)


class ReactPlanner:
    """Single-prompt loop: one task call per planning turn.

    The scratchpad is rebuilt from the session's action records, so each
    turn sees every observation so far; a ``Final Answer:`` reply finishes.
    """

    def __init__(
        self,
        registry: TaskRegistry,
        llm: Backend,
        params: CompletionParams | None = None,
        repair_budget: int = 1,
    ):
        self.registry = registry
        self.llm = llm
        self.params = params or CompletionParams(temperature=0.0)
        self.repair_budget = repair_budget

    def _complete(self, prompt: str) -> str:
        return self.llm.complete([ChatMessage("user", prompt)], self.params)

    def plan_turn(self, ctx: PlannerContext) -> PlannerOutcome:
        base_prompt = build_react_prompt(ctx)
        prompt = base_prompt
        last_error: Exception | None = None
        for _ in range(self.repair_budget + 1):
            output = self._complete(prompt)
            final_text = detect_finish(output)
            if final_text is not None:
                return PlannerOutcome(
                    kind=FINISHED,
                    raw_stage1=output,
                    final_text=final_text,
                    stage1_prompt=prompt,
                )
            try:
                plan = self._parse_step(output)
                return PlannerOutcome(
                    kind=PLAN_PRODUCED,
                    raw_stage1=output,
                    plan=plan,
                    decision=output.strip(),
                    stage1_prompt=prompt,
                )
            except (PlanError, PlannerError) as exc:
                last_error = exc
                prompt = prompts.get_template("planner.react_repair").format(
                    react_prompt=base_prompt, error=exc
                )
        raise PlanParseFailed(last_error)

    def _parse_step(self, output: str) -> Plan:
        actions = ACTION_RE.findall(output)
        action_inputs = ACTION_INPUT_RE.findall(output)
        if not actions or not action_inputs:
            raise PlannerError("reply names no Action / Action Input pair")
        task_name = actions[-1].strip().strip("*'\"")
        args = parse_string_list(action_inputs[-1].strip())
        step = PlanStep(
            binding="step_result",
            action=TaskCall(task=task_name, args=tuple(StringLiteral(a) for a in args)),
            line=1,
        )
        plan = Plan(steps=[step], source_text=output.strip())
        return validate_plan(plan, self.registry)


def make_planner(
    strategy: str,
    registry: TaskRegistry,
    llm: Backend,
    params: CompletionParams | None = None,
):
    if strategy == "tot":
        return TreeOfThoughtPlanner(registry, llm, params)
    if strategy == "react":
        return ReactPlanner(registry, llm, params)
    raise PlannerError(f"unknown planner strategy {strategy!r}; expected 'tot' or 'react'")
