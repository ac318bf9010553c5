"""Conversation sessions: history, accumulated action records, metadata.

Sessions are in-memory with optional one-file-per-session JSON persistence;
a restarted service reloads identical history. Turns within a session are
serialized by a per-session lock owned by the engine.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import AgentError
from .executor import ActionRecord, MetadataItem


class SessionError(AgentError):
    pass


class UnknownSession(SessionError):
    def __init__(self, session_id: str):
        super().__init__(f"no session {session_id!r}")
        self.session_id = session_id


class EngineBusy(SessionError):
    def __init__(self, session_id: str):
        super().__init__(f"a turn is already in flight for session {session_id}")
        self.session_id = session_id


@dataclass
class ConversationTurn:
    turn_id: int
    query: str
    answer: str
    tasks_used: list[str]
    language: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "turn_id": self.turn_id,
            "query": self.query,
            "answer": self.answer,
            "tasks_used": self.tasks_used,
            "language": self.language,
        }


@dataclass
class Session:
    session_id: str
    language: str | None = None  # explicit UI selector; None means auto-detect
    history: list[ConversationTurn] = field(default_factory=list)
    previous_actions: list[ActionRecord] = field(default_factory=list)
    metadata_items: list[MetadataItem] = field(default_factory=list)
    traces: dict[int, dict] = field(default_factory=dict)
    next_turn_id: int = 1
    turn_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def history_text(self) -> str:
        return "\n".join(f"USER: {t.query}\nCHA: {t.answer}" for t in self.history)

    def append_turn(self, query: str, answer: str, tasks_used: list[str], language: str,
                    trace: dict) -> int:
        turn_id = self.next_turn_id
        self.next_turn_id += 1
        self.history.append(
            ConversationTurn(turn_id=turn_id, query=query, answer=answer,
                             tasks_used=tasks_used, language=language)
        )
        self.traces[turn_id] = trace
        return turn_id

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "language": self.language,
            "history": [t.to_dict() for t in self.history],
            "previous_actions": [r.to_dict() for r in self.previous_actions],
            "metadata_items": [
                {"reference": m.reference, "kind": m.kind, "caption": m.caption}
                for m in self.metadata_items
            ],
            "traces": {str(k): v for k, v in self.traces.items()},
            "next_turn_id": self.next_turn_id,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "Session":
        return cls(
            session_id=raw["session_id"],
            language=raw.get("language"),
            history=[ConversationTurn(**t) for t in raw.get("history", [])],
            previous_actions=[ActionRecord.from_dict(r) for r in raw.get("previous_actions", [])],
            metadata_items=[MetadataItem(**m) for m in raw.get("metadata_items", [])],
            traces={int(k): v for k, v in raw.get("traces", {}).items()},
            next_turn_id=raw.get("next_turn_id", 1),
        )

    def history_hash(self) -> str:
        canonical = json.dumps([t.to_dict() for t in self.history], sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class SessionStore:
    def __init__(self, persist_dir: str | Path | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._persist_dir = Path(persist_dir) if persist_dir else None
        if self._persist_dir is not None:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._persist_dir.glob("*.json")):
                session = Session.from_dict(json.loads(path.read_text(encoding="utf-8")))
                self._sessions[session.session_id] = session

    def create(self, language: str | None = None) -> Session:
        session = Session(session_id=str(uuid.uuid4()), language=language)
        with self._lock:
            self._sessions[session.session_id] = session
        self.save(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._sessions)

    def save(self, session: Session) -> None:
        if self._persist_dir is None:
            return
        path = self._persist_dir / f"{session.session_id}.json"
        path.write_text(json.dumps(session.to_dict()), encoding="utf-8")
