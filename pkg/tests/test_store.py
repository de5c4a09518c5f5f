"""Coverage store: union monotonicity, order independence, phase machine,
atomic checksummed persistence."""

import itertools
import json
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jselide.analyzer import ResourceKey
from jselide.store import (
    CorruptState,
    CoverageBeacon,
    CoverageStore,
    MalformedBeacon,
    PhasePolicy,
    ResourcePhase,
    UnsupportedVersion,
)

KEY = ResourceKey(url="https://ex.com/a.js", content_hash="ab" * 32)


def beacon(ids, key=KEY, page=None, version=1):
    return CoverageBeacon(version=version, key=key, ids=tuple(ids), page_url=page, received_at=1.0)


def test_first_beacon_unions_with_empty():
    store = CoverageStore()
    rec = store.record_beacon(beacon(["a", "b"]))
    assert rec.executed == {"a", "b"}
    assert rec.beacon_count == 1


def test_union_grows():
    store = CoverageStore()
    store.record_beacon(beacon(["a"]))
    rec = store.record_beacon(beacon(["b"]))
    assert rec.executed == {"a", "b"}


def test_idempotent_union_still_counts_beacons():
    store = CoverageStore()
    store.record_beacon(beacon(["a", "b"]))
    before = store.record_beacon(beacon(["a"]))
    assert before.executed == {"a", "b"}
    assert before.beacon_count == 2


def test_empty_ids_accepted():
    store = CoverageStore()
    rec = store.record_beacon(beacon([]))
    assert rec.executed == frozenset()
    assert rec.beacon_count == 1


def test_unknown_key_reads_empty():
    store = CoverageStore()
    assert store.executed_ids(KEY) == frozenset()


def test_unsupported_version_rejected():
    store = CoverageStore()
    with pytest.raises(UnsupportedVersion):
        store.record_beacon(beacon(["a"], version=2))


def test_beacon_wire_format_parsing():
    b = CoverageBeacon.from_json(json.dumps({
        "v": 1,
        "key": {"url": "https://ex.com/a.js", "hash": "ff" * 32},
        "ids": ["x", "y"],
        "page": "https://ex.com/",
    }))
    assert b.key.content_hash == "ff" * 32
    assert b.ids == ("x", "y")
    assert b.page_url == "https://ex.com/"


@pytest.mark.parametrize("payload", [
    b"", b"null", b"[]", b'{"v":1}',
    b'{"v":1,"key":{"url":"u"},"ids":[]}',
    b'{"v":1,"key":{"url":"u","hash":"h"},"ids":"notalist"}',
    b'{"v":1,"key":{"url":"u","hash":"h"},"ids":[1,2]}',
])
def test_malformed_beacons_rejected(payload):
    with pytest.raises(MalformedBeacon):
        CoverageBeacon.from_json(payload)


def test_wrong_version_wire():
    with pytest.raises(UnsupportedVersion):
        CoverageBeacon.from_json(b'{"v":9,"key":{"url":"u","hash":"h"},"ids":[]}')


def test_order_independence_exhaustive():
    beacons = [beacon(["a", "b"]), beacon(["b", "c"]), beacon([]), beacon(["d"])]
    outcomes = set()
    for perm in itertools.permutations(beacons):
        store = CoverageStore()
        for b in perm:
            store.record_beacon(b)
        rec = store.record(KEY)
        outcomes.add((rec.executed, rec.beacon_count))
    assert outcomes == {(frozenset({"a", "b", "c", "d"}), 4)}


@settings(max_examples=120, deadline=None)
@given(st.permutations(list(range(6))), st.lists(
    st.lists(st.sampled_from("abcdefgh"), max_size=4), min_size=6, max_size=6))
def test_order_independence_property(perm, id_lists):
    direct = CoverageStore()
    shuffled = CoverageStore()
    beacons = [beacon(ids) for ids in id_lists]
    for b in beacons:
        direct.record_beacon(b)
    for i in perm:
        shuffled.record_beacon(beacons[i])
    a, b = direct.record(KEY), shuffled.record(KEY)
    assert a.executed == b.executed
    assert a.beacon_count == b.beacon_count


def test_monotone_growth_over_any_sequence():
    store = CoverageStore()
    seen = frozenset()
    for ids in (["a"], [], ["b", "c"], ["a"], ["d"], []):
        rec = store.record_beacon(beacon(ids))
        assert rec.executed >= seen
        seen = rec.executed


def test_phase_transitions():
    store = CoverageStore()
    policy = PhasePolicy(min_beacons=5)
    assert store.phase(KEY, policy) is ResourcePhase.LEARNING
    for i in range(4):
        store.record_beacon(beacon(["a"]))
        assert store.phase(KEY, policy) is ResourcePhase.LEARNING
    store.record_beacon(beacon(["a"]))
    assert store.phase(KEY, policy) is ResourcePhase.ELIDED
    store.record_beacon(beacon(["a"]))
    assert store.phase(KEY, policy) is ResourcePhase.ELIDED


def test_phase_freeze_override():
    store = CoverageStore()
    for _ in range(9):
        store.record_beacon(beacon(["a"]))
    assert store.phase(KEY, PhasePolicy(min_beacons=5, freeze=True)) is ResourcePhase.LEARNING


def test_phase_policy_validation():
    with pytest.raises(ValueError):
        PhasePolicy(min_beacons=0)


def test_new_id_bookkeeping():
    store = CoverageStore()
    store.record_beacon(beacon(["a", "b"]))
    store.record_beacon(beacon(["a"]))
    rec = store.record_beacon(beacon(["c"]))
    assert rec.first_seen_beacon == {"a": 1, "b": 1, "c": 3}
    assert rec.new_per_beacon == (2, 0, 1)


def test_pages_recorded():
    store = CoverageStore()
    store.record_beacon(beacon(["a"], page="https://site/p1"))
    rec = store.record_beacon(beacon(["b"], page="https://site/p2"))
    assert rec.pages == {"https://site/p1", "https://site/p2"}


# ----------------------------------------------------------------------
# persistence

def test_empty_store_round_trip(tmp_path):
    p = tmp_path / "state.txt"
    CoverageStore().save(p)
    loaded = CoverageStore.load(p)
    assert loaded.records() == []


def test_round_trip_two_records(tmp_path):
    p = tmp_path / "state.txt"
    store = CoverageStore()
    key2 = ResourceKey(url="https://ex.com/b.js", content_hash="cd" * 32)
    store.record_beacon(beacon(["a", "b"], page="https://pg/"))
    store.record_beacon(beacon(["z"], key=key2))
    store.record_beacon(beacon(["c"]))
    store.save(p)
    loaded = CoverageStore.load(p)
    assert sorted(r.key.url for r in loaded.records()) == sorted(r.key.url for r in store.records())
    a, b = loaded.record(KEY), store.record(KEY)
    assert a == b


def test_truncated_file_refused(tmp_path):
    p = tmp_path / "state.txt"
    store = CoverageStore()
    store.record_beacon(beacon(["a", "b", "c"]))
    store.save(p)
    raw = p.read_bytes()
    for cut in (len(raw) - 1, len(raw) // 2, 10):
        p.write_bytes(raw[:cut])
        with pytest.raises(CorruptState):
            CoverageStore.load(p)


def test_corrupted_byte_refused(tmp_path):
    p = tmp_path / "state.txt"
    store = CoverageStore()
    store.record_beacon(beacon(["a"]))
    store.save(p)
    raw = bytearray(p.read_bytes())
    raw[len(raw) // 3] ^= 0xFF
    p.write_bytes(bytes(raw))
    with pytest.raises(CorruptState):
        CoverageStore.load(p)


def test_autosave_persists_each_beacon(tmp_path):
    p = tmp_path / "state.txt"
    store = CoverageStore(path=p)
    store.record_beacon(beacon(["a"]))
    assert CoverageStore.load(p).executed_ids(KEY) == {"a"}
    store.record_beacon(beacon(["b"]))
    assert CoverageStore.load(p).executed_ids(KEY) == {"a", "b"}


def test_concurrent_writers_and_readers():
    store = CoverageStore()
    ids = [f"id{i}" for i in range(64)]
    errors = []

    def writer(chunk):
        try:
            for fid in chunk:
                store.record_beacon(beacon([fid]))
        except Exception as e:  # pragma: no cover
            errors.append(e)

    def reader():
        # reads must be whole snapshots: with union-only growth, every read
        # is a superset of the previous one, never a partial state
        try:
            prev: frozenset = frozenset()
            for _ in range(200):
                snap = store.executed_ids(KEY)
                assert snap >= prev
                prev = snap
        except Exception as e:  # pragma: no cover
            errors.append(e)

    threads = [threading.Thread(target=writer, args=(ids[i::4],)) for i in range(4)]
    threads += [threading.Thread(target=reader) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert store.executed_ids(KEY) == set(ids)
    assert store.beacon_count(KEY) == 64
