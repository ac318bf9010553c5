"""Task abstraction, registry, and the prompt fragments the planner consumes.

A task is an external capability: a metadata record (``TaskSpec``) that the
planner reads, plus an executable body invoked with an ordered argument
list. Registries are write-once-then-read-shared: all registrations happen
before the engine starts serving.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterator

from .errors import AgentError

NAME_RE = re.compile(r"\A[a-z][a-z0-9_]*\Z")

BLOCK_RULE = "-" * 35


class TaskError(AgentError):
    pass


class DuplicateName(TaskError):
    def __init__(self, name: str):
        super().__init__(f"a task named {name!r} is already registered")
        self.name = name


class InvalidSpec(TaskError):
    def __init__(self, name: str, reason: str):
        super().__init__(f"invalid task spec {name!r}: {reason}")
        self.name = name
        self.reason = reason


class UnknownTask(TaskError):
    def __init__(self, name: str):
        super().__init__(f"no task registered under {name!r}")
        self.name = name


@dataclass(frozen=True)
class TaskSpec:
    """Planner-facing metadata describing one task.

    ``name`` is the single join key across prompts, generated plan code and
    execution; ``chat_name`` is display-only. ``output_type`` True means the
    result is stored in the Data Pipe and only its reference circulates.
    """

    name: str
    chat_name: str
    description: str
    inputs: list[str]
    outputs: list[str]
    output_type: bool = False
    dependencies: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not NAME_RE.match(self.name):
            raise InvalidSpec(self.name, "name must match [a-z][a-z0-9_]*")
        if not self.chat_name:
            raise InvalidSpec(self.name, "chat_name must be non-empty")
        if not self.inputs or any(not i for i in self.inputs):
            raise InvalidSpec(self.name, "inputs must be a non-empty list of non-empty strings")
        if not self.outputs or any(not o for o in self.outputs):
            raise InvalidSpec(self.name, "outputs must be a non-empty list of non-empty strings")


@dataclass
class TaskOutput:
    """What a task body hands back to the executor."""

    payload: Any
    produced_metadata: list[str] = field(default_factory=list)


# A body receives the resolved, ordered argument list (strings or payloads)
# and returns a TaskOutput or a bare payload.
TaskBody = Callable[[list[Any]], Any]


@dataclass(frozen=True)
class RegisteredTask:
    spec: TaskSpec
    body: TaskBody


def render_task_brief(spec: TaskSpec) -> str:
    """First-stage planning block: name, description and output descriptions."""
    lines = [f"**{spec.name}**: {spec.description}"]
    if spec.dependencies:
        lines.append("Dependencies: " + ", ".join(spec.dependencies))
    lines.append("This tool have the following outputs:")
    head = "\n".join(lines)
    outputs = "\n\n".join(spec.outputs)
    return f"{head}\n\n{outputs}"


def render_task_full(spec: TaskSpec) -> str:
    """Second-stage block: brief plus numbered inputs and the return contract.

    Tasks whose results go to the Data Pipe end with the Data Pipe sentence so
    the code generator knows only the reference comes back.
    """
    parts = [f"**{spec.name}**: {spec.description}"]
    if spec.dependencies:
        parts.append("Dependencies: " + ", ".join(spec.dependencies))
    parts.append("  The input to this tool should be a list of data representing:")
    for i, text in enumerate(spec.inputs, start=1):
        parts.append(f"   {i}-{text}")
    parts.append("   This tool will return the following data:")
    for text in spec.outputs:
        parts.append(f"- {text}")
    block = "\n\n".join(parts)
    if spec.output_type:
        block += "\n\n The result will be stored in the Data Pipe."
    return block


class TaskRegistry:
    """Ordered task registry; iteration order is registration order."""

    def __init__(self) -> None:
        self._tasks: dict[str, RegisteredTask] = {}
        self._dependencies_checked = False

    def register(self, spec: TaskSpec, body: TaskBody) -> RegisteredTask:
        spec.validate()
        if spec.name in self._tasks:
            raise DuplicateName(spec.name)
        registered = RegisteredTask(spec=spec, body=body)
        self._tasks[spec.name] = registered
        self._dependencies_checked = False
        return registered

    def lookup(self, name: str) -> RegisteredTask:
        try:
            return self._tasks[name]
        except KeyError:
            raise UnknownTask(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._tasks

    def __len__(self) -> int:
        return len(self._tasks)

    def __iter__(self) -> Iterator[RegisteredTask]:
        return iter(self._tasks.values())

    def names(self) -> list[str]:
        return list(self._tasks)

    def specs(self) -> list[TaskSpec]:
        """Registration-ordered spec snapshot; checks dependencies on first use."""
        if not self._dependencies_checked:
            for task in self._tasks.values():
                for dep in task.spec.dependencies:
                    if dep not in self._tasks:
                        raise InvalidSpec(
                            task.spec.name, f"dependency {dep!r} is not a registered task"
                        )
            self._dependencies_checked = True
        return [task.spec for task in self._tasks.values()]


def load_manifest(path: str | Path, bodies: dict[str, TaskBody]) -> TaskRegistry:
    """Build a registry from a declarative manifest file.

    The manifest is a JSON array of records carrying every TaskSpec field;
    each record's body binds by name through ``bodies``.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise TaskError(f"manifest {path} must contain a JSON array of task records")
    registry = TaskRegistry()
    for record in raw:
        spec = TaskSpec(
            name=record["name"],
            chat_name=record["chat_name"],
            description=record["description"],
            inputs=list(record["inputs"]),
            outputs=list(record["outputs"]),
            output_type=bool(record.get("output_type", False)),
            dependencies=list(record.get("dependencies", [])),
        )
        if spec.name not in bodies:
            raise UnknownTask(spec.name)
        registry.register(spec, bodies[spec.name])
    return registry
