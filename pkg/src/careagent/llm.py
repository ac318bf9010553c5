"""Uniform chat-completion interface with scripted and remote backends.

The scripted backend replays canned responses from a fixture file and is a
pure function of (fixture, prompt sequence): identical replays are
byte-identical. The remote backend speaks the common chat-completions JSON
convention; base URL, path, auth header, and model id are configuration.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from .errors import AgentError

logger = logging.getLogger(__name__)

_WHITESPACE_RE = re.compile(r"\s+")

MATCH_KINDS = ("turn_index", "substring", "prompt_hash")


class BackendError(AgentError):
    pass


class NoFixtureMatch(BackendError):
    def __init__(self, turn_index: int, prompt_head: str):
        super().__init__(
            f"no fixture entry matches completion call {turn_index}; "
            f"prompt starts: {prompt_head!r}"
        )
        self.turn_index = turn_index


class FixtureParseError(BackendError):
    pass


class AmbiguousMatchers(BackendError):
    def __init__(self, indices: list[int]):
        super().__init__(f"fixture entries {indices} carry identical matchers")
        self.indices = indices


class RemoteError(BackendError):
    def __init__(self, status: int, body_excerpt: str):
        super().__init__(f"remote backend returned {status}: {body_excerpt}")
        self.status = status
        self.body_excerpt = body_excerpt


class Timeout(BackendError):
    pass


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise BackendError(f"unknown chat role {self.role!r}")
        if self.role in ("user", "assistant") and not self.content:
            raise BackendError(f"{self.role} message content must be non-empty")


@dataclass(frozen=True)
class CompletionParams:
    model: str = "scripted"
    temperature: float = 0.0
    max_tokens: int = 2048


class Backend(Protocol):
    def complete(self, messages: list[ChatMessage], params: CompletionParams) -> str: ...


def normalized_prompt_hash(text: str) -> str:
    """Stable 64-bit hash of whitespace-normalized text, hex encoded."""
    normalized = _WHITESPACE_RE.sub(" ", text).strip()
    return hashlib.blake2b(normalized.encode("utf-8"), digest_size=8).hexdigest()


@dataclass(frozen=True)
class FixtureEntry:
    match_kind: str  # one of MATCH_KINDS
    match_value: str | int
    response: str

    def matches(self, turn_index: int, prompt: str) -> bool:
        if self.match_kind == "turn_index":
            return turn_index == int(self.match_value)
        if self.match_kind == "substring":
            return str(self.match_value) in prompt
        return normalized_prompt_hash(prompt) == str(self.match_value)


@dataclass
class ScriptedFixture:
    entries: list[FixtureEntry] = field(default_factory=list)

    def lint(self) -> None:
        seen: dict[tuple[str, str], int] = {}
        duplicates: list[int] = []
        for i, entry in enumerate(self.entries):
            key = (entry.match_kind, str(entry.match_value))
            if key in seen:
                duplicates.extend([seen[key], i])
            else:
                seen[key] = i
        if duplicates:
            raise AmbiguousMatchers(sorted(set(duplicates)))


def load_fixture(path: str | Path) -> ScriptedFixture:
    """Load and lint a scripted fixture file (JSON array of matcher records)."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (ValueError, OSError) as exc:
        raise FixtureParseError(f"cannot load fixture {path}: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise FixtureParseError(f"fixture {path} must be a non-empty JSON array")
    entries = []
    for i, record in enumerate(raw):
        try:
            kind = record["match_kind"]
            if kind not in MATCH_KINDS:
                raise FixtureParseError(f"fixture entry {i}: unknown match_kind {kind!r}")
            entries.append(
                FixtureEntry(
                    match_kind=kind,
                    match_value=record["match_value"],
                    response=record["response"],
                )
            )
        except (KeyError, TypeError) as exc:
            raise FixtureParseError(f"fixture entry {i} is malformed: {exc}") from exc
    fixture = ScriptedFixture(entries=entries)
    fixture.lint()
    return fixture


def _render_prompt(messages: list[ChatMessage]) -> str:
    return "\n".join(m.content for m in messages)


class ScriptedBackend:
    """Deterministic stand-in mapping prompt matchers to canned responses.

    First matching entry wins; matching is evaluated against the concatenated
    message contents. The call counter feeds turn_index matchers.
    """

    def __init__(self, fixture: ScriptedFixture):
        fixture.lint()
        self.fixture = fixture
        self.calls: list[str] = []
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        return cls(load_fixture(path))

    def complete(self, messages: list[ChatMessage], params: CompletionParams) -> str:
        prompt = _render_prompt(messages)
        with self._lock:
            turn_index = len(self.calls)
            self.calls.append(prompt)
        for entry in self.fixture.entries:
            if entry.matches(turn_index, prompt):
                return entry.response
        raise NoFixtureMatch(turn_index, prompt[:80])


class RemoteBackend:
    """Chat-completions HTTP client with bounded retries."""

    def __init__(
        self,
        base_url: str,
        api_key: str = "",
        path: str = "/v1/chat/completions",
        auth_header: str = "Authorization",
        auth_scheme: str = "Bearer",
        timeout: float = 30.0,
        retries: int = 2,
    ):
        self.base_url = base_url.rstrip("/")
        self.path = path
        self.api_key = api_key
        self.auth_header = auth_header
        self.auth_scheme = auth_scheme
        self.timeout = timeout
        self.retries = retries

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            value = f"{self.auth_scheme} {self.api_key}" if self.auth_scheme else self.api_key
            headers[self.auth_header] = value
        return headers

    def complete(self, messages: list[ChatMessage], params: CompletionParams) -> str:
        body = {
            "model": params.model,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        url = f"{self.base_url}{self.path}"
        last_error: BackendError | None = None
        for attempt in range(self.retries + 1):
            try:
                response = httpx.post(url, json=body, headers=self._headers(), timeout=self.timeout)
            except httpx.TimeoutException as exc:
                last_error = Timeout(f"remote backend timed out after {self.timeout}s: {exc}")
                continue
            except httpx.HTTPError as exc:
                last_error = RemoteError(0, str(exc))
                continue
            if response.status_code >= 500:
                last_error = RemoteError(response.status_code, response.text[:200])
                time.sleep(0.05 * (attempt + 1))
                continue
            if response.status_code != 200:
                raise RemoteError(response.status_code, response.text[:200])
            try:
                payload = response.json()
                return payload["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise RemoteError(response.status_code, f"unexpected body: {exc}") from exc
        assert last_error is not None
        raise last_error
