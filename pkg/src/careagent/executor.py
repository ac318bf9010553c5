"""Task execution and the planner/executor orchestration loop.

Runs validated plans step by step with Data Pipe mediation, records every
task call as an ActionRecord, and loops back to the planner until it
signals sufficiency or the iteration bound is hit, then hands the gathered
records to the response generator.

Step failures never escape the execution loop: they become FAILED-tagged
records the planner can see on the next iteration, enabling replanning.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

from .datapipe import DataPipe, is_reference
from .errors import AgentError
from .llm import BackendError
from .planlang import (
    AliasBind,
    FieldExtract,
    FieldRef,
    LiteralBind,
    Plan,
    StringLiteral,
    TaskCall,
    VariableRef,
)
from .planner import (
    FINISHED,
    MissingDecisionMarker,
    PlannerContext,
    PlanParseFailed,
)
from .prompts import RECORD_RULE
from .response import ResponseGenerator, ThinkerBundle
from .tasks import TaskOutput, TaskRegistry
from .translate import EN, LanguageTag, TranslationError, Translator, TRANSLATE

logger = logging.getLogger(__name__)

COMPLETED = "completed"
FAILED = "failed"

BACKEND_DOWN_ANSWER = (
    "I am sorry, I could not reach the language model right now, so I cannot "
    "answer your question. Please try again in a moment."
)

APOLOGY_PREFIX = (
    "Start by apologizing that the planned analysis could not be completed, then "
    "answer as well as the gathered information allows"
)


class ExecutionError(AgentError):
    pass


class FieldMissing(ExecutionError):
    def __init__(self, variable: str, key: str):
        super().__init__(f"variable {variable!r} has no field {key!r}")
        self.variable = variable
        self.key = key


@dataclass
class ActionRecord:
    """One executed task: what ran, with which inputs, and what came back.

    Datapipe references stay symbolic in both directions so intermediate
    payloads never leak into prompts.
    """

    task_name: str
    rendered_inputs: list[str]
    rendered_output: str
    step_index: int
    duration: float = 0.0
    failed: bool = False

    def block(self) -> str:
        return f"{self.task_name}: {self.rendered_inputs}\n\n{self.rendered_output}"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ActionRecord":
        return cls(**raw)


def format_previous_actions(records: list[ActionRecord]) -> str:
    """Dash-framed blocks, one per record, in execution order."""
    blocks = [f"{RECORD_RULE}\n\n{r.block()}\n\n{RECORD_RULE}" for r in records]
    return "\n\n".join(blocks)


def serialize_payload(payload: Any) -> str:
    return payload if isinstance(payload, str) else repr(payload)


@dataclass
class ExecutionOutcome:
    records: list[ActionRecord]
    bindings: dict[str, Any]
    status: str  # COMPLETED | FAILED
    failed_step: int | None = None
    error: str | None = None


def run_plan(plan: Plan, registry: TaskRegistry, pipe: DataPipe) -> ExecutionOutcome:
    """Execute a validated plan sequentially; stop at the first failure."""
    if not plan.validated:
        raise ExecutionError("refusing to run a plan that was not validated")
    bindings: dict[str, Any] = {}
    records: list[ActionRecord] = []

    def materialize(value: Any) -> Any:
        # a binding that holds a reference resolves before field access
        return pipe.retrieve(value) if is_reference(value) else value

    def extract_field(variable: str, key: str) -> Any:
        source = materialize(bindings[variable])
        if not isinstance(source, Mapping) or key not in source:
            raise FieldMissing(variable, key)
        return source[key]

    for index, step in enumerate(plan.steps):
        action = step.action
        try:
            if isinstance(action, LiteralBind):
                bindings[step.binding] = action.value
            elif isinstance(action, AliasBind):
                bindings[step.binding] = bindings[action.variable]
            elif isinstance(action, FieldExtract):
                bindings[step.binding] = extract_field(action.variable, action.key)
            else:
                record = _run_task_call(step.binding, action, registry, pipe, bindings, len(records))
                records.append(record)
        except Exception as exc:  # captured in status, never thrown past the loop
            logger.warning("plan step %d failed: %s", index, exc)
            records.append(
                ActionRecord(
                    task_name=action.task if isinstance(action, TaskCall) else step.binding,
                    rendered_inputs=_symbolic_inputs(action, bindings),
                    rendered_output=f"FAILED: {exc}",
                    step_index=len(records),
                    failed=True,
                )
            )
            return ExecutionOutcome(records, bindings, FAILED, failed_step=index, error=str(exc))
    return ExecutionOutcome(records, bindings, COMPLETED)


def _argument_value(arg: Any, bindings: dict[str, Any], pipe: DataPipe) -> Any:
    if isinstance(arg, StringLiteral):
        return arg.value
    if isinstance(arg, VariableRef):
        return bindings[arg.name]
    source = bindings[arg.variable]
    if is_reference(source):
        source = pipe.retrieve(source)
    if not isinstance(source, Mapping) or arg.key not in source:
        raise FieldMissing(arg.variable, arg.key)
    return source[arg.key]


def _symbolic_inputs(action: Any, bindings: dict[str, Any]) -> list[str]:
    if not isinstance(action, TaskCall):
        return []
    rendered = []
    for arg in action.args:
        if isinstance(arg, StringLiteral):
            rendered.append(arg.value)
        elif isinstance(arg, VariableRef):
            rendered.append(serialize_payload(bindings.get(arg.name, arg.name)))
        else:
            rendered.append(f"{arg.variable}[{arg.key!r}]")
    return rendered


def _run_task_call(
    binding: str,
    call: TaskCall,
    registry: TaskRegistry,
    pipe: DataPipe,
    bindings: dict[str, Any],
    record_index: int,
) -> ActionRecord:
    task = registry.lookup(call.task)
    symbolic = [_argument_value(arg, bindings, pipe) for arg in call.args]
    rendered_inputs = [serialize_payload(value) for value in symbolic]
    resolved = pipe.resolve_arguments(symbolic)
    started = time.perf_counter()
    result = task.body(resolved)
    duration = time.perf_counter() - started
    payload = result.payload if isinstance(result, TaskOutput) else result
    if task.spec.output_type:
        reference = pipe.store(payload, producer=call.task)
        bindings[binding] = reference
        rendered_output = reference
    else:
        bindings[binding] = payload
        rendered_output = serialize_payload(payload)
    return ActionRecord(
        task_name=call.task,
        rendered_inputs=rendered_inputs,
        rendered_output=rendered_output,
        step_index=record_index,
        duration=duration,
    )


# -- inbound conversion ---------------------------------------------------------


@dataclass
class MetadataItem:
    reference: str  # datapipe reference to the stored upload
    kind: str = "file"  # image | audio | text | file (modality field)
    caption: str = ""

    def descriptor(self) -> str:
        line = f"{self.kind} file stored at {self.reference}"
        if self.caption:
            line += f": {self.caption}"
        return line


@dataclass
class PreparedInput:
    question: str  # English at planning time under translate mode
    source_language: LanguageTag
    descriptors: list[str]


def prepare_input(
    raw_query: str,
    metadata_items: list[MetadataItem],
    lang_mode: str,
    translator: Translator,
    language: LanguageTag | None = None,
) -> PreparedInput:
    """Convert the inbound query and metadata for the planner.

    Non-English queries are translated to English under translate mode;
    translation failures degrade to the source text with a logged warning.
    """
    from .translate import detect_language

    source = language or detect_language(raw_query)
    question = raw_query
    if lang_mode == TRANSLATE and source != EN:
        try:
            question = translator.translate(raw_query, source, EN)
        except TranslationError as exc:
            logger.warning("inbound translation failed (%s); retaining source text", exc)
    return PreparedInput(
        question=question,
        source_language=source,
        descriptors=[item.descriptor() for item in metadata_items],
    )


# -- orchestration loop ----------------------------------------------------------


@dataclass
class PlannerTurnTrace:
    stage1_prompt: str
    stage1_output: str
    outcome: str  # "plan" | "finish" | "degraded"
    decision: str | None = None
    stage2_prompt: str | None = None
    stage2_output: str | None = None
    plan_source: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class TurnTrace:
    query: str
    question: str
    language: str
    planner_turns: list[PlannerTurnTrace] = field(default_factory=list)
    records: list[ActionRecord] = field(default_factory=list)
    thinker_prompt: str = ""
    raw_answer: str = ""
    answer: str = ""
    tasks_used: list[str] = field(default_factory=list)
    error: str | None = None

    def prompts(self) -> list[str]:
        """Every prompt this turn sent to an LLM, in order."""
        collected: list[str] = []
        for turn in self.planner_turns:
            collected.append(turn.stage1_prompt)
            if turn.stage2_prompt:
                collected.append(turn.stage2_prompt)
        if self.thinker_prompt:
            collected.append(self.thinker_prompt)
        return collected

    def plan_sources(self) -> list[str]:
        return [t.plan_source for t in self.planner_turns if t.plan_source is not None]

    def to_dict(self) -> dict[str, Any]:
        return {
            "query": self.query,
            "question": self.question,
            "language": self.language,
            "planner_turns": [t.to_dict() for t in self.planner_turns],
            "records": [r.to_dict() for r in self.records],
            "thinker_prompt": self.thinker_prompt,
            "raw_answer": self.raw_answer,
            "answer": self.answer,
            "tasks_used": self.tasks_used,
            "error": self.error,
        }


@dataclass
class TurnResult:
    answer: str
    tasks_used: list[str]
    trace: TurnTrace
    error: str | None = None


class TaskExecutor:
    """Drives one conversational turn end to end."""

    def __init__(
        self,
        registry: TaskRegistry,
        pipe: DataPipe,
        planner,
        responder: ResponseGenerator,
        translator: Translator,
        max_iterations: int = 3,
        lang_mode: str = TRANSLATE,
    ):
        self.registry = registry
        self.pipe = pipe
        self.planner = planner
        self.responder = responder
        self.translator = translator
        self.max_iterations = max_iterations
        self.lang_mode = lang_mode

    def orchestrate_turn(self, session, raw_query: str, metadata_items: list[MetadataItem]) -> TurnResult:
        session.metadata_items.extend(metadata_items)
        explicit = LanguageTag(session.language) if session.language else None
        prepared = prepare_input(
            raw_query, session.metadata_items, self.lang_mode, self.translator, language=explicit
        )
        trace = TurnTrace(
            query=raw_query, question=prepared.question, language=prepared.source_language.code
        )
        turn_records: list[ActionRecord] = []
        degraded_error: str | None = None

        for _ in range(self.max_iterations):
            ctx = PlannerContext(
                specs=self.registry.specs(),
                question=prepared.question,
                metadata=prepared.descriptors,
                history=session.history_text(),
                previous_actions=format_previous_actions(session.previous_actions),
                action_triples=[
                    (r.task_name, repr(r.rendered_inputs), r.rendered_output)
                    for r in session.previous_actions
                ],
            )
            try:
                outcome = self.planner.plan_turn(ctx)
            except BackendError as exc:
                return self._backend_down(trace, exc)
            except (PlanParseFailed, MissingDecisionMarker) as exc:
                logger.warning("planning degraded: %s", exc)
                degraded_error = str(exc)
                break
            trace.planner_turns.append(
                PlannerTurnTrace(
                    stage1_prompt=outcome.stage1_prompt,
                    stage1_output=outcome.raw_stage1,
                    outcome=outcome.kind,
                    decision=outcome.decision,
                    stage2_prompt=outcome.stage2_prompt,
                    stage2_output=outcome.raw_stage2,
                    plan_source=outcome.plan.source_text if outcome.plan else None,
                )
            )
            if outcome.kind == FINISHED:
                break
            result = run_plan(outcome.plan, self.registry, self.pipe)
            session.previous_actions.extend(result.records)
            turn_records.extend(result.records)

        trace.records = turn_records
        bundle = ThinkerBundle(
            question=prepared.question,
            metadata="\n".join(item.descriptor() for item in session.metadata_items),
            history=session.history_text(),
            action_blocks=format_previous_actions(session.previous_actions),
            prefix=self._prefix(degraded_error),
        )
        try:
            answer, thinker_prompt = self.responder.generate(bundle)
        except BackendError as exc:
            return self._backend_down(trace, exc)
        trace.thinker_prompt = thinker_prompt
        trace.raw_answer = answer
        outbound = self._translate_back(answer, prepared.source_language)
        trace.answer = outbound
        trace.tasks_used = self._tasks_used(turn_records)
        trace.error = degraded_error
        return TurnResult(answer=outbound, tasks_used=trace.tasks_used, trace=trace,
                          error=degraded_error)

    def _prefix(self, degraded_error: str | None) -> str:
        base = self.responder.prefix
        if degraded_error is None:
            return base
        apology = APOLOGY_PREFIX
        return f"{apology}. {base}" if base else apology

    def _translate_back(self, answer: str, source: LanguageTag) -> str:
        if self.lang_mode != TRANSLATE or source == EN:
            return answer
        try:
            return self.translator.translate(answer, EN, source)
        except TranslationError as exc:
            logger.warning("outbound translation failed (%s); returning English text", exc)
            return answer

    def _tasks_used(self, records: list[ActionRecord]) -> list[str]:
        names = []
        for record in records:
            if record.failed or record.task_name not in self.registry:
                continue
            names.append(self.registry.lookup(record.task_name).spec.chat_name)
        return names

    def _backend_down(self, trace: TurnTrace, exc: BackendError) -> TurnResult:
        logger.error("llm backend unavailable: %s", exc)
        trace.error = str(exc)
        trace.answer = BACKEND_DOWN_ANSWER
        return TurnResult(
            answer=BACKEND_DOWN_ANSWER, tasks_used=[], trace=trace, error=str(exc)
        )
