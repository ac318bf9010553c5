"""Parser for the restricted plan notation the planner's second stage emits.

The grammar is a closed allowlist: assignments whose right-hand side is an
``self.execute_task(...)`` call, a single-level field extraction, a string
literal, or an alias of an earlier binding. Anything else (loops,
conditionals, attribute access, arithmetic) is a syntax error; generated
code is never evaluated, only parsed.

    stmt := IDENT "=" rhs
    rhs  := "self.execute_task" "(" STRING "," "[" [arg {"," arg}] "]" ")"
          | IDENT "[" STRING "]"
          | STRING
          | IDENT
    arg  := STRING | IDENT | IDENT "[" STRING "]"

Comments (``# ...``) and blank lines are skipped; newlines inside brackets
continue the statement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .errors import AgentError
from .tasks import TaskRegistry, UnknownTask


class PlanError(AgentError):
    pass


class PlanSyntaxError(PlanError):
    def __init__(self, message: str, line: int, column: int, expected: str | None = None):
        detail = f"line {line}, column {column}: {message}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.line = line
        self.column = column
        self.expected = expected


class UseBeforeDefine(PlanError):
    def __init__(self, variable: str, line: int):
        super().__init__(f"line {line}: variable {variable!r} used before it is defined")
        self.variable = variable
        self.line = line


class EmptyBlock(PlanError):
    pass


class UnknownPlanTask(PlanError, UnknownTask):
    # a plan error too, so the planner's bounded repair path catches it
    def __init__(self, name: str, step_index: int):
        AgentError.__init__(self, f"no task registered under {name!r} (plan step {step_index})")
        self.name = name
        self.step_index = step_index


class ArityMismatch(PlanError):
    def __init__(self, task: str, expected: int, got: int, step_index: int):
        super().__init__(
            f"task {task!r} takes {expected} input(s) but step {step_index} passes {got}"
        )
        self.task = task
        self.expected = expected
        self.got = got
        self.step_index = step_index


class NoTaskCall(PlanError):
    pass


class CannotRender(PlanError):
    pass


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class StringLiteral:
    value: str


@dataclass(frozen=True)
class VariableRef:
    name: str


@dataclass(frozen=True)
class FieldRef:
    variable: str
    key: str


Arg = Union[StringLiteral, VariableRef, FieldRef]


@dataclass(frozen=True)
class TaskCall:
    task: str
    args: tuple[Arg, ...]


@dataclass(frozen=True)
class FieldExtract:
    variable: str
    key: str


@dataclass(frozen=True)
class LiteralBind:
    value: str


@dataclass(frozen=True)
class AliasBind:
    variable: str


Action = Union[TaskCall, FieldExtract, LiteralBind, AliasBind]


@dataclass(frozen=True)
class PlanStep:
    binding: str
    action: Action
    line: int = 0


@dataclass
class Plan:
    steps: list[PlanStep]
    source_text: str = ""
    validated: bool = False

    def structure(self) -> tuple:
        """Line- and source-independent shape, for structural comparison."""
        return tuple((s.binding, s.action) for s in self.steps)

    def task_calls(self) -> list[PlanStep]:
        return [s for s in self.steps if isinstance(s.action, TaskCall)]


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<comment>\#[^\n]*)
      | (?P<nl>\n)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<string>'[^'\n]*'|"[^"\n]*")
      | (?P<punct>[=\[\](),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT | STRING | PUNCT | NEWLINE | EOF
    text: str
    line: int
    column: int


def _tokenize(code: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, column = 1, 1
    depth = 0
    i, n = 0, len(code)
    while i < n:
        m = _TOKEN_RE.match(code, i)
        if m is None:
            raise PlanSyntaxError(f"unexpected character {code[i]!r}", line, column)
        text = m.group(0)
        if m.lastgroup == "nl":
            if depth == 0 and tokens and tokens[-1].kind != "NEWLINE":
                tokens.append(_Token("NEWLINE", "\n", line, column))
            line += 1
            column = 1
        else:
            if m.lastgroup == "ident":
                tokens.append(_Token("IDENT", text, line, column))
            elif m.lastgroup == "string":
                tokens.append(_Token("STRING", text, line, column))
            elif m.lastgroup == "punct":
                if text in "([":
                    depth += 1
                elif text in ")]":
                    depth = max(0, depth - 1)
                tokens.append(_Token("PUNCT", text, line, column))
            column += len(text)
        i = m.end()
    tokens.append(_Token("EOF", "", line, column))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _next(self) -> _Token:
        token = self._tokens[self._pos]
        if token.kind != "EOF":
            self._pos += 1
        return token

    def _expect(self, kind: str, text: str | None = None, expected: str | None = None) -> _Token:
        token = self._peek()
        if token.kind != kind or (text is not None and token.text != text):
            raise PlanSyntaxError(
                f"unexpected {token.kind.lower()} {token.text!r}",
                token.line,
                token.column,
                expected=expected or (text if text is not None else kind.lower()),
            )
        return self._next()

    def _skip_newlines(self) -> None:
        while self._peek().kind == "NEWLINE":
            self._next()

    def parse_plan_steps(self) -> list[PlanStep]:
        steps: list[PlanStep] = []
        defined: set[str] = set()
        self._skip_newlines()
        while self._peek().kind != "EOF":
            steps.append(self._parse_statement(defined))
            self._skip_newlines()
        return steps

    def _parse_statement(self, defined: set[str]) -> PlanStep:
        # parse the whole statement first so syntax errors win over
        # use-before-define; referenced variables are checked afterwards
        binding = self._expect("IDENT", expected="a variable name")
        self._expect("PUNCT", "=", expected="'='")
        refs: list[_Token] = []
        action = self._parse_rhs(refs)
        token = self._peek()
        if token.kind not in ("NEWLINE", "EOF"):
            raise PlanSyntaxError(
                f"unexpected {token.kind.lower()} {token.text!r} after statement",
                token.line,
                token.column,
                expected="end of line",
            )
        for ref in refs:
            if ref.text not in defined:
                raise UseBeforeDefine(ref.text, ref.line)
        defined.add(binding.text)
        return PlanStep(binding=binding.text, action=action, line=binding.line)

    def _parse_rhs(self, refs: list[_Token]) -> Action:
        token = self._peek()
        if token.kind == "STRING":
            return LiteralBind(value=self._string_value(self._next()))
        if token.kind != "IDENT":
            raise PlanSyntaxError(
                f"unexpected {token.kind.lower()} {token.text!r}",
                token.line,
                token.column,
                expected="a string, variable, field access, or self.execute_task call",
            )
        ident = self._next()
        nxt = self._peek()
        if ident.text == "self" and nxt.kind == "PUNCT" and nxt.text == ".":
            self._next()
            fn = self._expect("IDENT", expected="'execute_task'")
            if fn.text != "execute_task":
                raise PlanSyntaxError(
                    f"unknown call {fn.text!r}", fn.line, fn.column, expected="'execute_task'"
                )
            return self._parse_call(refs)
        if nxt.kind == "PUNCT" and nxt.text == "[":
            self._next()
            key = self._expect("STRING", expected="a string key")
            self._expect("PUNCT", "]", expected="']'")
            refs.append(ident)
            return FieldExtract(variable=ident.text, key=self._string_value(key))
        refs.append(ident)
        return AliasBind(variable=ident.text)

    def _parse_call(self, refs: list[_Token]) -> TaskCall:
        self._expect("PUNCT", "(", expected="'('")
        self._skip_newlines()
        name = self._expect("STRING", expected="a quoted task name")
        self._expect("PUNCT", ",", expected="','")
        self._skip_newlines()
        self._expect("PUNCT", "[", expected="'['")
        args: list[Arg] = []
        self._skip_newlines()
        if not (self._peek().kind == "PUNCT" and self._peek().text == "]"):
            while True:
                args.append(self._parse_arg(refs))
                self._skip_newlines()
                if self._peek().kind == "PUNCT" and self._peek().text == ",":
                    self._next()
                    self._skip_newlines()
                    continue
                break
        self._expect("PUNCT", "]", expected="']'")
        self._skip_newlines()
        self._expect("PUNCT", ")", expected="')'")
        return TaskCall(task=self._string_value(name), args=tuple(args))

    def _parse_arg(self, refs: list[_Token]) -> Arg:
        token = self._peek()
        if token.kind == "STRING":
            return StringLiteral(value=self._string_value(self._next()))
        if token.kind == "IDENT":
            ident = self._next()
            if self._peek().kind == "PUNCT" and self._peek().text == "[":
                self._next()
                key = self._expect("STRING", expected="a string key")
                self._expect("PUNCT", "]", expected="']'")
                refs.append(ident)
                return FieldRef(variable=ident.text, key=self._string_value(key))
            refs.append(ident)
            return VariableRef(name=ident.text)
        raise PlanSyntaxError(
            f"unexpected {token.kind.lower()} {token.text!r}",
            token.line,
            token.column,
            expected="a string, variable, or field access",
        )

    @staticmethod
    def _string_value(token: _Token) -> str:
        return token.text[1:-1]


# -- public operations ---------------------------------------------------------

_FENCE_TEMPLATE = r"```{tag}[ \t]*\n(.*?)```"
_COMMENT_LINE_RE = re.compile(r"^\s*(#.*)?$")


def extract_code_block(llm_output: str, tag: str = "python") -> str:
    """Return the contents of the first fenced block carrying the given tag.

    Falls back to the whole output, trimmed, when no tagged fence exists.
    Raises EmptyBlock when a fence is present but holds only whitespace and
    comments.
    """
    fence_re = re.compile(_FENCE_TEMPLATE.format(tag=re.escape(tag)), re.DOTALL)
    m = fence_re.search(llm_output)
    if m is None:
        return llm_output.strip()
    body = m.group(1)
    if all(_COMMENT_LINE_RE.match(line) for line in body.splitlines()):
        raise EmptyBlock("fenced block contains no statements")
    return body


def parse_plan(code: str) -> Plan:
    """Parse plan code into a Plan; never executes anything."""
    tokens = _tokenize(code)
    steps = _Parser(tokens).parse_plan_steps()
    return Plan(steps=steps, source_text=code)


def parse_string_list(text: str) -> list[str]:
    """Parse a bracketed list of string literals, e.g. ``['a', 'b']``."""
    tokens = _tokenize(text.strip())
    parser = _Parser(tokens)
    parser._expect("PUNCT", "[", expected="'['")
    values: list[str] = []
    parser._skip_newlines()
    if not (parser._peek().kind == "PUNCT" and parser._peek().text == "]"):
        while True:
            token = parser._expect("STRING", expected="a quoted string")
            values.append(_Parser._string_value(token))
            parser._skip_newlines()
            if parser._peek().kind == "PUNCT" and parser._peek().text == ",":
                parser._next()
                parser._skip_newlines()
                continue
            break
    parser._expect("PUNCT", "]", expected="']'")
    parser._expect("EOF", expected="end of input")
    return values


def validate_plan(plan: Plan, registry: TaskRegistry) -> Plan:
    """Statically check a parsed plan against the registry and mark it validated."""
    has_call = False
    for index, step in enumerate(plan.steps):
        if isinstance(step.action, TaskCall):
            has_call = True
            if step.action.task not in registry:
                raise UnknownPlanTask(step.action.task, step_index=index)
            expected = len(registry.lookup(step.action.task).spec.inputs)
            got = len(step.action.args)
            if expected != got:
                raise ArityMismatch(step.action.task, expected=expected, got=got, step_index=index)
    if plan.steps and not has_call:
        raise NoTaskCall("plan binds variables but never calls a task")
    plan.validated = True
    return plan


def _quote(value: str) -> str:
    if "'" not in value:
        return f"'{value}'"
    if '"' not in value:
        return f'"{value}"'
    raise CannotRender(f"string {value!r} mixes both quote characters")


def _render_arg(arg: Arg) -> str:
    if isinstance(arg, StringLiteral):
        return _quote(arg.value)
    if isinstance(arg, VariableRef):
        return arg.name
    return f"{arg.variable}[{_quote(arg.key)}]"


def render_canonical(plan: Plan) -> str:
    """Emit canonical code such that parsing it reproduces the plan's structure."""
    lines: list[str] = []
    for step in plan.steps:
        action = step.action
        if isinstance(action, LiteralBind):
            rhs = _quote(action.value)
        elif isinstance(action, AliasBind):
            rhs = action.variable
        elif isinstance(action, FieldExtract):
            rhs = f"{action.variable}[{_quote(action.key)}]"
        else:
            rendered = ", ".join(_render_arg(a) for a in action.args)
            rhs = f"self.execute_task({_quote(action.task)}, [{rendered}])"
        lines.append(f"{step.binding} = {rhs}")
    return "\n".join(lines)
