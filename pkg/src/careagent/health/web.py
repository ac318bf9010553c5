"""Internet search and webpage text extraction tasks.

Both tasks run against pluggable clients. The offline stubs resolve queries
through a fixture map and documents through a fixture directory keyed by a
URL hash, so demos and tests never touch the network.
"""

from __future__ import annotations

import hashlib
import re
from html.parser import HTMLParser
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import AgentError

DEFAULT_TEXT_BUDGET = 8000

_SKIPPED_ELEMENTS = {"script", "style", "noscript", "template"}
_WHITESPACE_RE = re.compile(r"\s+")


class WebTaskError(AgentError):
    pass


class NoResults(WebTaskError):
    def __init__(self, query: str):
        super().__init__(f"search returned no results for {query!r}")
        self.query = query


class ClientError(WebTaskError):
    pass


class FetchFailure(WebTaskError):
    pass


class NotHtml(WebTaskError):
    pass


def url_fixture_name(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:16] + ".html"


class SearchClient(Protocol):
    def search(self, query: str) -> str: ...


class StubSearchClient:
    """Maps fixture queries to fixture URLs (``query<TAB>url`` per line)."""

    def __init__(self, map_path: str | Path):
        self._urls: dict[str, str] = {}
        for line in Path(map_path).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            query, _, url = line.partition("\t")
            self._urls[query.strip()] = url.strip()

    def search(self, query: str) -> str:
        url = self._urls.get(query.strip())
        if url is None:
            raise NoResults(query)
        return url


class FetchClient(Protocol):
    def fetch(self, url: str) -> tuple[str | None, str]: ...


class FixtureFetchClient:
    """Resolves URLs against a local directory of captured documents."""

    def __init__(self, www_dir: str | Path):
        self.www_dir = Path(www_dir)

    def fetch(self, url: str) -> tuple[str | None, str]:
        path = self.www_dir / url_fixture_name(url)
        if not path.is_file():
            raise FetchFailure(f"no fixture document for {url!r}")
        return None, path.read_text(encoding="utf-8")


class HttpFetchClient:
    def __init__(self, timeout: float = 20.0):
        self.timeout = timeout

    def fetch(self, url: str) -> tuple[str | None, str]:
        try:
            response = httpx.get(url, timeout=self.timeout, follow_redirects=True)
        except httpx.HTTPError as exc:
            raise FetchFailure(f"cannot fetch {url!r}: {exc}") from exc
        if response.status_code != 200:
            raise FetchFailure(f"fetching {url!r} returned {response.status_code}")
        return response.headers.get("content-type"), response.text


class _TextCollector(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self._chunks: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag in _SKIPPED_ELEMENTS:
            self._skip_depth += 1

    def handle_endtag(self, tag: str) -> None:
        if tag in _SKIPPED_ELEMENTS and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data: str) -> None:
        if not self._skip_depth and data.strip():
            self._chunks.append(data)

    def text(self) -> str:
        return _WHITESPACE_RE.sub(" ", " ".join(self._chunks)).strip()


def html_to_text(document: str) -> str:
    collector = _TextCollector()
    collector.feed(document)
    return collector.text()


def looks_like_html(content_type: str | None, document: str) -> bool:
    if content_type is not None:
        return "html" in content_type or "xml" in content_type
    return document.lstrip().startswith("<")


def extract_page_text(url: str, client: FetchClient, budget: int = DEFAULT_TEXT_BUDGET) -> str:
    """Fetch a document, strip markup, collapse whitespace, cap the length."""
    content_type, document = client.fetch(url)
    if not looks_like_html(content_type, document):
        raise NotHtml(f"document at {url!r} is not HTML")
    return html_to_text(document)[:budget]
