import re

import pytest
from hypothesis import given, strategies as st

from careagent.datapipe import (
    DataPipe,
    MalformedKey,
    REFERENCE_RE,
    UnknownKey,
    is_reference,
)

KEY_PATTERN = re.compile(
    r"\Adatapipe:[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}\Z"
)


def test_store_returns_reference_in_key_format(pipe):
    ref = pipe.store({"ppg": [1, 2, 3]}, producer="affect_ppg_get")
    assert KEY_PATTERN.match(ref)


def test_store_retrieve_round_trip(pipe):
    payload = {"ppg": [0.1, 0.2], "hr": [60, 61], "nested": {"a": ["x", "y"]}}
    ref = pipe.store(payload, producer="affect_ppg_get")
    assert pipe.retrieve(ref) == payload


def test_identical_payloads_get_distinct_keys(pipe):
    first = pipe.store("same", producer="t")
    second = pipe.store("same", producer="t")
    assert first != second


def test_retrieve_malformed_key(pipe):
    with pytest.raises(MalformedKey):
        pipe.retrieve("datapipe:not-a-uuid")


def test_retrieve_plain_string_is_malformed(pipe):
    with pytest.raises(MalformedKey):
        pipe.retrieve("hello")


def test_retrieve_unknown_key(pipe):
    ref = pipe.store("x", producer="t")
    missing = "datapipe:" + "0" * 8 + "-0000-0000-0000-" + "0" * 12
    assert missing != ref
    with pytest.raises(UnknownKey):
        pipe.retrieve(missing)


def test_resolve_arguments_without_references_is_identity(pipe):
    args = ["par_5", "2020-08-01", ""]
    assert pipe.resolve_arguments(args) == args
    assert pipe.resolve_arguments(pipe.resolve_arguments(args)) == args


def test_resolve_arguments_substitutes_payload(pipe):
    features = {"rmssd": 15.5, "sdnn": 40.0}
    ref = pipe.store(features, producer="affect_ppg_analysis")
    assert pipe.resolve_arguments([ref]) == [features]


def test_resolve_arguments_mixed(pipe):
    payload = [{"date": 1, "ppg": 0.5}]
    ref = pipe.store(payload, producer="affect_ppg_get")
    assert pipe.resolve_arguments([ref, "average"]) == [payload, "average"]


def test_resolve_arguments_unknown_key_carries_position(pipe):
    missing = "datapipe:" + "1" * 8 + "-1111-1111-1111-" + "1" * 12
    with pytest.raises(UnknownKey) as err:
        pipe.resolve_arguments(["ok", missing])
    assert err.value.position == 1


def test_entry_records_producer(pipe):
    ref = pipe.store({"a": 1}, producer="google_search")
    assert pipe.entry(ref).producer == "google_search"


def test_is_reference():
    assert is_reference("datapipe:6d808840-1fbe-45a5-859a-abfbfee93d0e")
    assert not is_reference("datapipe:6D808840-1FBE-45A5-859A-ABFBFEE93D0E")
    assert not is_reference(42)
    assert not is_reference("see datapipe:6d808840-1fbe-45a5-859a-abfbfee93d0e")


def test_reference_regex_matches_spec_example():
    assert REFERENCE_RE.search("datapipe:6d808840-1fbe-45a5-859a-abfbfee93d0e")


def test_persistence_round_trip(tmp_path):
    store_dir = tmp_path / "pipe"
    pipe = DataPipe(persist_dir=store_dir)
    ref = pipe.store({"level": 3}, producer="affect_stress_analysis")
    reloaded = DataPipe(persist_dir=store_dir)
    assert reloaded.retrieve(ref) == {"level": 3}
    assert reloaded.entry(ref).producer == "affect_stress_analysis"


@given(st.lists(st.text(max_size=30).filter(lambda s: not s.startswith("datapipe:"))))
def test_resolve_arguments_passthrough_property(args):
    pipe = DataPipe()
    assert pipe.resolve_arguments(args) == args
