"""Multilingual path: detect the query language, translate to English for
planning, and translate the final answer back.

Two modes: ``retain`` plans in the source language and performs zero
translation calls; ``translate`` (the default) routes through a translation
client. The bundled stub client works from a phrase dictionary so tests and
offline demos stay deterministic.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from .errors import AgentError

logger = logging.getLogger(__name__)

DEFAULT_SUPPORTED = ("en", "es")

RETAIN = "retain"
TRANSLATE = "translate"


class TranslationError(AgentError):
    pass


class UnsupportedLanguage(TranslationError):
    def __init__(self, code: str):
        super().__init__(f"language tag {code!r} is not in the supported set")
        self.code = code


class UnknownPhrase(TranslationError):
    def __init__(self, text: str):
        super().__init__(f"stub dictionary has no entry for {text!r}")
        self.text = text


class RemoteTranslationError(TranslationError):
    pass


@dataclass(frozen=True)
class LanguageTag:
    code: str

    def __post_init__(self) -> None:
        if not re.match(r"\A[a-z]{2}\Z", self.code):
            raise TranslationError(f"language tag must be two lowercase letters, got {self.code!r}")


EN = LanguageTag("en")
ES = LanguageTag("es")

_ES_MARKERS = "¿¡áéíóúñü"
_ES_STOPWORDS = {
    "el", "la", "los", "las", "un", "una", "es", "de", "del", "en", "que", "qué",
    "cómo", "cuál", "mi", "mis", "por", "para", "con", "durante", "nivel", "paciente",
    "estrés", "sueño", "dormir", "mejorar", "puedo", "agosto", "recupera", "salud",
}
_WORD_RE = re.compile(r"[\wáéíóúñü¿¡]+", re.UNICODE)


def detect_language(text: str) -> LanguageTag:
    """Best-guess language tag via a lightweight marker/stopword heuristic.

    Deterministic for fixed text; falls back to English.
    """
    if not text:
        raise TranslationError("cannot detect the language of empty text")
    if any(ch in _ES_MARKERS for ch in text.lower()):
        return ES
    words = [w.lower() for w in _WORD_RE.findall(text)]
    hits = sum(1 for w in words if w in _ES_STOPWORDS)
    if words and hits / len(words) >= 0.25:
        return ES
    return EN


class TranslationClient(Protocol):
    def translate(self, text: str, src: LanguageTag, dst: LanguageTag) -> str: ...


class StubTranslationClient:
    """Dictionary-backed client for offline test pairs.

    The dictionary file holds one record per line: ``src<TAB>dst<TAB>source
    phrase<TAB>translated phrase``. Unknown phrases fall through verbatim
    with a logged warning.
    """

    def __init__(self, dictionary_path: str | Path | None = None):
        self.calls = 0
        self._pairs: dict[tuple[str, str, str], str] = {}
        if dictionary_path is not None:
            self.load(dictionary_path)

    def load(self, path: str | Path) -> None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise TranslationError(f"{path}:{lineno}: expected 4 tab-separated fields")
            src, dst, source_phrase, translated = parts
            self._pairs[(src, dst, source_phrase.strip())] = translated.strip()

    def add(self, src: str, dst: str, source_phrase: str, translated: str) -> None:
        self._pairs[(src, dst, source_phrase)] = translated

    def translate(self, text: str, src: LanguageTag, dst: LanguageTag) -> str:
        self.calls += 1
        hit = self._pairs.get((src.code, dst.code, text.strip()))
        if hit is None:
            logger.warning("stub dictionary has no %s->%s entry; passing text through verbatim",
                           src.code, dst.code)
            raise UnknownPhrase(text)
        return hit


class RemoteTranslationClient:
    """Calls a configured translation HTTP endpoint."""

    def __init__(self, endpoint: str, timeout: float = 15.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self.calls = 0

    def translate(self, text: str, src: LanguageTag, dst: LanguageTag) -> str:
        self.calls += 1
        try:
            response = httpx.post(
                self.endpoint,
                json={"text": text, "source": src.code, "target": dst.code},
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise RemoteTranslationError(str(exc)) from exc
        if response.status_code != 200:
            raise RemoteTranslationError(
                f"translation endpoint returned {response.status_code}: {response.text[:200]}"
            )
        try:
            return response.json()["translation"]
        except (ValueError, KeyError, TypeError) as exc:
            raise RemoteTranslationError(f"unexpected translation body: {exc}") from exc


class Translator:
    """Policy wrapper enforcing the supported set and the identity law."""

    def __init__(
        self,
        client: TranslationClient | None = None,
        supported: tuple[str, ...] = DEFAULT_SUPPORTED,
    ):
        if "en" not in supported:
            raise TranslationError("the supported language set must include 'en'")
        self.client = client
        self.supported = supported

    def check_supported(self, tag: LanguageTag) -> LanguageTag:
        if tag.code not in self.supported:
            raise UnsupportedLanguage(tag.code)
        return tag

    def translate(self, text: str, src: LanguageTag, dst: LanguageTag) -> str:
        self.check_supported(src)
        self.check_supported(dst)
        if src == dst:
            return text
        if self.client is None:
            raise TranslationError("no translation client configured")
        try:
            return self.client.translate(text, src, dst)
        except UnknownPhrase:
            return text
