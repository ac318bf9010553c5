"""Engine assembly: wires config into registry, backends, executor, sessions."""

from __future__ import annotations

import base64
import binascii
import logging
from pathlib import Path
from typing import Any

from .config import ConfigError, EngineConfig
from .datapipe import DataPipe, deterministic_key_factory
from .errors import AgentError
from .executor import MetadataItem, TaskExecutor, TurnResult
from .health import build_demo_registry
from .health.records import HealthDataError
from .llm import Backend, CompletionParams, ScriptedBackend, RemoteBackend
from .planner import make_planner
from .response import ResponseGenerator
from .session import EngineBusy, Session, SessionStore, UnknownSession
from .translate import (
    RemoteTranslationClient,
    StubTranslationClient,
    Translator,
)

logger = logging.getLogger(__name__)


class InvalidQuery(AgentError):
    pass


def _params(raw) -> CompletionParams:
    return CompletionParams(model=raw.model, temperature=raw.temperature, max_tokens=raw.max_tokens)


class Engine:
    """One process-wide engine: registry, data pipe, planner, sessions."""

    def __init__(self, config: EngineConfig):
        config.validate()
        self.config = config
        try:
            self.registry = build_demo_registry(
                data_dir=config.data_dir,
                fixtures_dir=config.fixtures_dir,
                enabled=config.enabled_tasks,
                text_budget=config.text_budget,
            )
            self.registry.specs()
        except (HealthDataError, OSError) as exc:
            raise ConfigError(str(exc)) from exc

        persist = Path(config.persist_dir) if config.persist_dir else None
        # scripted runs use a seeded key stream so replays are bit-identical
        key_factory = deterministic_key_factory() if config.backend == "scripted" else None
        self.pipe = DataPipe(persist / "datapipe" if persist else None, key_factory=key_factory)
        self.sessions = SessionStore(persist / "sessions" if persist else None)

        if config.backend == "scripted":
            # one shared backend keeps the scripted call sequence global,
            # so turn_index matchers see planner and responder calls alike
            shared = ScriptedBackend.from_file(config.fixture_path)
            planner_llm: Backend = shared
            responder_llm: Backend = shared
        else:
            planner_llm = RemoteBackend(config.remote_base_url, api_key=config.remote_api_key)
            responder_llm = RemoteBackend(config.remote_base_url, api_key=config.remote_api_key)
        self.planner_llm = planner_llm
        self.responder_llm = responder_llm

        if config.translation_endpoint:
            client = RemoteTranslationClient(config.translation_endpoint)
        elif config.phrase_dictionary:
            client = StubTranslationClient(config.phrase_dictionary)
        else:
            client = None
        self.translator = Translator(client, supported=tuple(config.languages))

        planner = make_planner(
            config.strategy, self.registry, planner_llm, _params(config.planner_llm)
        )
        responder = ResponseGenerator(
            responder_llm, _params(config.responder_llm), prefix=config.response_prefix
        )
        self.executor = TaskExecutor(
            registry=self.registry,
            pipe=self.pipe,
            planner=planner,
            responder=responder,
            translator=self.translator,
            max_iterations=config.max_iterations,
            lang_mode=config.lang_mode,
        )

    # -- session operations -------------------------------------------------

    def create_session(self, language: str | None = None) -> Session:
        return self.sessions.create(language=language)

    def respond(
        self,
        session_id: str | None,
        query: str,
        metadata_refs: list[dict[str, str]] | None = None,
        language: str | None = None,
    ) -> dict[str, Any]:
        """Run one conversational turn; serialized per session."""
        if not query or not query.strip():
            raise InvalidQuery("query must be non-empty")
        session = self.sessions.create() if session_id is None else self.sessions.get(session_id)
        if language:
            session.language = language
        items = [
            MetadataItem(
                reference=ref["reference"],
                kind=ref.get("kind", "file"),
                caption=ref.get("caption", ""),
            )
            for ref in (metadata_refs or [])
        ]
        if not session.turn_lock.acquire(blocking=False):
            raise EngineBusy(session.session_id)
        try:
            result: TurnResult = self.executor.orchestrate_turn(session, query, items)
            turn_id = session.append_turn(
                query=query,
                answer=result.answer,
                tasks_used=result.tasks_used,
                language=result.trace.language,
                trace=result.trace.to_dict(),
            )
            self.sessions.save(session)
        finally:
            session.turn_lock.release()
        return {
            "session_id": session.session_id,
            "answer": result.answer,
            "turn_id": turn_id,
            "tasks_used": result.tasks_used,
            "language": result.trace.language,
            "error": result.error,
        }

    def history(self, session_id: str) -> list[dict[str, Any]]:
        return [t.to_dict() for t in self.sessions.get(session_id).history]

    def trace(self, session_id: str, turn_id: int) -> dict[str, Any]:
        session = self.sessions.get(session_id)
        if turn_id not in session.traces:
            raise UnknownSession(f"{session_id}/turn/{turn_id}")
        return session.traces[turn_id]

    def upload_metadata(
        self, filename: str, content_b64: str, kind: str = "file", caption: str = ""
    ) -> str:
        """Store an uploaded file in the data pipe; only its reference circulates."""
        try:
            base64.b64decode(content_b64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise InvalidQuery(f"metadata content must be base64: {exc}") from exc
        payload = {
            "filename": filename,
            "kind": kind,
            "caption": caption,
            "content_b64": content_b64,
        }
        return self.pipe.store(payload, producer="metadata_upload")

    def task_summaries(self) -> list[dict[str, Any]]:
        return [
            {
                "name": spec.name,
                "chat_name": spec.chat_name,
                "description": spec.description,
                "inputs": spec.inputs,
                "outputs": spec.outputs,
                "output_type": spec.output_type,
                "dependencies": spec.dependencies,
            }
            for spec in self.registry.specs()
        ]
