import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from careagent.llm import (
    AmbiguousMatchers,
    ChatMessage,
    CompletionParams,
    BackendError,
    FixtureEntry,
    FixtureParseError,
    NoFixtureMatch,
    RemoteBackend,
    RemoteError,
    ScriptedBackend,
    ScriptedFixture,
    load_fixture,
    normalized_prompt_hash,
)

PARAMS = CompletionParams()


def scripted(entries) -> ScriptedBackend:
    return ScriptedBackend(ScriptedFixture([FixtureEntry(*e) for e in entries]))


def msg(text: str) -> list[ChatMessage]:
    return [ChatMessage("user", text)]


def test_substring_matcher():
    backend = scripted([("substring", "suggest three creative strategies", "stage one reply")])
    out = backend.complete(msg("please suggest three creative strategies now"), PARAMS)
    assert out == "stage one reply"


def test_turn_index_matcher():
    backend = scripted([("turn_index", 0, "first"), ("turn_index", 1, "second")])
    assert backend.complete(msg("a"), PARAMS) == "first"
    assert backend.complete(msg("a"), PARAMS) == "second"


def test_prompt_hash_matcher():
    prompt = "Hello   world\n\twith   spacing"
    digest = normalized_prompt_hash(prompt)
    assert digest == normalized_prompt_hash("Hello world with spacing")
    backend = scripted([("prompt_hash", digest, "hashed")])
    assert backend.complete(msg(prompt), PARAMS) == "hashed"


def test_first_match_wins():
    backend = scripted([
        ("substring", "specific phrase", "specific"),
        ("substring", "phrase", "generic"),
    ])
    assert backend.complete(msg("a specific phrase here"), PARAMS) == "specific"
    assert backend.complete(msg("another phrase"), PARAMS) == "generic"


def test_no_fixture_match():
    backend = scripted([("substring", "never present", "x")])
    with pytest.raises(NoFixtureMatch):
        backend.complete(msg("something else"), PARAMS)


def test_empty_fixture_list_never_matches():
    backend = ScriptedBackend(ScriptedFixture([]))
    with pytest.raises(NoFixtureMatch):
        backend.complete(msg("anything"), PARAMS)


def test_replays_are_deterministic():
    entries = [("substring", "q1", "r1"), ("substring", "q2", "r2")]
    prompts = ["leading q1 text", "and q2 text"]
    outputs = []
    for _ in range(2):
        backend = scripted(entries)
        outputs.append([backend.complete(msg(p), PARAMS) for p in prompts])
    assert outputs[0] == outputs[1] == ["r1", "r2"]


def test_load_fixture_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps([
        {"match_kind": "substring", "match_value": "a", "response": "ra"},
        {"match_kind": "turn_index", "match_value": 1, "response": "rb"},
        {"match_kind": "prompt_hash", "match_value": "00ff", "response": "rc"},
    ]))
    fixture = load_fixture(path)
    assert len(fixture.entries) == 3


def test_load_fixture_duplicate_matchers(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps([
        {"match_kind": "substring", "match_value": "same", "response": "a"},
        {"match_kind": "substring", "match_value": "same", "response": "b"},
    ]))
    with pytest.raises(AmbiguousMatchers) as err:
        load_fixture(path)
    assert err.value.indices == [0, 1]


def test_load_fixture_empty_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text("")
    with pytest.raises(FixtureParseError):
        load_fixture(path)


def test_load_fixture_bad_kind(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps([{"match_kind": "regex", "match_value": "x", "response": "y"}]))
    with pytest.raises(FixtureParseError):
        load_fixture(path)


def test_chat_message_validation():
    with pytest.raises(BackendError):
        ChatMessage("tool", "hi")
    with pytest.raises(BackendError):
        ChatMessage("user", "")
    assert ChatMessage("system", "").content == ""


class _StubHandler(BaseHTTPRequestHandler):
    fail_times = 0
    seen: list[dict] = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).seen.append({"body": body, "auth": self.headers.get("Authorization")})
        if type(self).fail_times > 0:
            type(self).fail_times -= 1
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        reply = {"choices": [{"message": {"role": "assistant", "content": "stub says hi"}}]}
        data = json.dumps(reply).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubHandler.fail_times = 0
    _StubHandler.seen = []
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_remote_backend_round_trip(stub_server):
    backend = RemoteBackend(stub_server, api_key="sk-test", path="/v1/chat/completions")
    out = backend.complete(msg("hello"), CompletionParams(model="demo", temperature=0.5))
    assert out == "stub says hi"
    sent = _StubHandler.seen[0]
    assert sent["auth"] == "Bearer sk-test"
    assert sent["body"]["model"] == "demo"
    assert sent["body"]["messages"] == [{"role": "user", "content": "hello"}]


def test_remote_backend_retries_then_succeeds(stub_server):
    _StubHandler.fail_times = 2
    backend = RemoteBackend(stub_server, retries=2)
    assert backend.complete(msg("x"), PARAMS) == "stub says hi"
    assert len(_StubHandler.seen) == 3


def test_remote_backend_retry_budget_exhausted(stub_server):
    _StubHandler.fail_times = 5
    backend = RemoteBackend(stub_server, retries=2)
    with pytest.raises(RemoteError) as err:
        backend.complete(msg("x"), PARAMS)
    assert err.value.status == 500
    assert len(_StubHandler.seen) == 3  # initial try + 2 retries


def test_remote_backend_client_error_not_retried(stub_server):
    class _Deny(_StubHandler):
        def do_POST(self):
            self.send_response(401)
            self.end_headers()
            self.wfile.write(b"no")

    server = HTTPServer(("127.0.0.1", 0), _Deny)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        backend = RemoteBackend(f"http://127.0.0.1:{server.server_port}", retries=2)
        with pytest.raises(RemoteError) as err:
            backend.complete(msg("x"), PARAMS)
        assert err.value.status == 401
    finally:
        server.shutdown()
