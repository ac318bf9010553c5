"""Keyed store for intermediate task outputs.

Task results flagged as intermediate are stored here under opaque
``datapipe:<uuid>`` references. Only the reference string ever circulates
through prompts; execution resolves references back into payloads right
before a task body runs.
"""

from __future__ import annotations

import json
import random
import re
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from .errors import AgentError

REFERENCE_RE = re.compile(
    r"datapipe:[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}"
)
_FULL_REFERENCE_RE = re.compile(rf"\A{REFERENCE_RE.pattern}\Z")

REFERENCE_PREFIX = "datapipe:"


class DatapipeError(AgentError):
    pass


class MalformedKey(DatapipeError):
    def __init__(self, reference: str):
        super().__init__(f"malformed datapipe reference: {reference!r}")
        self.reference = reference


class UnknownKey(DatapipeError):
    def __init__(self, reference: str, position: int | None = None):
        where = "" if position is None else f" (argument {position})"
        super().__init__(f"no entry stored under {reference!r}{where}")
        self.reference = reference
        self.position = position


class StorageFailure(DatapipeError):
    pass


@dataclass
class DatapipeEntry:
    key: str  # canonical hyphenated lowercase uuid
    payload: Any
    producer: str
    created_at: float


def is_reference(value: Any) -> bool:
    return isinstance(value, str) and _FULL_REFERENCE_RE.match(value) is not None


def deterministic_key_factory(seed: int = 0) -> Callable[[], str]:
    """UUID-shaped keys from a seeded stream, for bit-deterministic replays."""
    rng = random.Random(seed)

    def make() -> str:
        return str(uuid.UUID(int=rng.getrandbits(128), version=4))

    return make


class DataPipe:
    """In-memory key/value store with optional one-file-per-entry persistence.

    Entries live for the store's lifetime; there is no eviction. Safe for
    concurrent store/retrieve from multiple sessions.
    """

    def __init__(
        self,
        persist_dir: str | Path | None = None,
        key_factory: Callable[[], str] | None = None,
    ):
        self._entries: dict[str, DatapipeEntry] = {}
        self._lock = threading.Lock()
        self._key_factory = key_factory or (lambda: str(uuid.uuid4()))
        self._persist_dir = Path(persist_dir) if persist_dir else None
        if self._persist_dir is not None:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            self._load_persisted()

    def __len__(self) -> int:
        return len(self._entries)

    def store(self, payload: Any, producer: str) -> str:
        """Store a payload and return its ``datapipe:<uuid>`` reference."""
        with self._lock:
            key = self._key_factory()
            while key in self._entries:  # deterministic streams may replay old keys
                key = self._key_factory()
        entry = DatapipeEntry(key=key, payload=payload, producer=producer, created_at=time.time())
        if self._persist_dir is not None:
            self._persist(entry)
        with self._lock:
            self._entries[key] = entry
        return REFERENCE_PREFIX + key

    def retrieve(self, reference: str) -> Any:
        """Return the payload stored under a reference string."""
        if not is_reference(reference):
            raise MalformedKey(str(reference))
        key = reference[len(REFERENCE_PREFIX):]
        with self._lock:
            entry = self._entries.get(key)
        if entry is None:
            raise UnknownKey(reference)
        return entry.payload

    def entry(self, reference: str) -> DatapipeEntry:
        if not is_reference(reference):
            raise MalformedKey(str(reference))
        key = reference[len(REFERENCE_PREFIX):]
        with self._lock:
            found = self._entries.get(key)
        if found is None:
            raise UnknownKey(reference)
        return found

    def resolve_arguments(self, args: Sequence[Any]) -> list[Any]:
        """Replace every argument that is a reference string with its payload.

        Non-reference arguments pass through verbatim; order is preserved.
        UnknownKey carries the failing argument's position.
        """
        resolved: list[Any] = []
        for position, arg in enumerate(args):
            if is_reference(arg):
                try:
                    resolved.append(self.retrieve(arg))
                except UnknownKey:
                    raise UnknownKey(arg, position=position) from None
            else:
                resolved.append(arg)
        return resolved

    # -- persistence -------------------------------------------------------

    def _persist(self, entry: DatapipeEntry) -> None:
        record = {
            "key": entry.key,
            "producer": entry.producer,
            "created_at": entry.created_at,
            "payload": entry.payload,
        }
        path = self._persist_dir / f"{entry.key}.json"
        try:
            path.write_text(json.dumps(record), encoding="utf-8")
        except (TypeError, ValueError, OSError) as exc:
            raise StorageFailure(f"cannot persist entry {entry.key}: {exc}") from exc

    def _load_persisted(self) -> None:
        for path in sorted(self._persist_dir.glob("*.json")):
            try:
                record = json.loads(path.read_text(encoding="utf-8"))
            except (ValueError, OSError) as exc:
                raise StorageFailure(f"cannot read persisted entry {path.name}: {exc}") from exc
            self._entries[record["key"]] = DatapipeEntry(
                key=record["key"],
                payload=record["payload"],
                producer=record.get("producer", ""),
                created_at=record.get("created_at", 0.0),
            )
