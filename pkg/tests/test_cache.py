"""Codec round-trips and cache directory layout."""

import gzip
import json
import os
import time

import pytest

from jselide.analyzer import ResourceKey
from jselide.cache import (
    CachedResource,
    DecodeError,
    ResourceCache,
    UnsupportedEncoding,
    decode_body,
    is_javascript,
    transcode,
)


def test_identity_round_trip():
    assert transcode(b"abc", "identity") == b"abc"
    assert decode_body(b"abc", "identity") == b"abc"


def test_gzip_round_trip_random_bytes():
    payload = os.urandom(1024)
    assert decode_body(transcode(payload, "gzip"), "gzip") == payload


def test_gzip_decode_of_origin_bytes():
    assert decode_body(gzip.compress(b"abc"), "gzip") == b"abc"


def test_transcode_deterministic():
    assert transcode(b"same", "gzip") == transcode(b"same", "gzip")


def test_unsupported_encoding_token():
    with pytest.raises(UnsupportedEncoding):
        transcode(b"abc", "zstd")
    with pytest.raises(UnsupportedEncoding):
        decode_body(b"abc", "compress")


def test_invalid_gzip_raises_decode_error():
    with pytest.raises(DecodeError):
        decode_body(b"definitely not gzip", "gzip")


@pytest.mark.parametrize("ct,expected", [
    ("application/javascript", True),
    ("text/javascript; charset=utf-8", True),
    ("application/x-javascript", True),
    ("text/html", False),
    ("text/css", False),
    (None, False),
])
def test_js_content_type_detection(ct, expected):
    assert is_javascript(ct) is expected


def _resource(url="https://ex.com/a.js", body=b"function f(){}"):
    return CachedResource(
        key=ResourceKey.for_body(url, body),
        url=url,
        status=200,
        headers=[("Content-Type", "application/javascript"), ("Server", "o")],
        decoded_body=body,
        original_encoding="gzip",
        content_type="application/javascript",
        fetched_at=time.time(),
    )


def test_cache_layout_on_disk(tmp_path):
    cache = ResourceCache(tmp_path)
    res = _resource()
    cache.put(res)
    chash = res.key.content_hash
    d = tmp_path / chash
    assert (d / "original").read_bytes() == res.decoded_body
    meta = json.loads((d / "meta").read_text())
    assert meta["url"] == res.url
    assert meta["original_encoding"] == "gzip"
    cache.put_variant(chash, "instrumented", b"I")
    cache.put_variant(chash, "elided", b"E")
    assert (d / "instrumented").read_bytes() == b"I"
    assert (d / "elided").read_bytes() == b"E"
    cache.put_sidecars(chash, {"deadbeef": "(function(){}).apply(this,arguments);"})
    assert (d / "sidecars" / "deadbeef").exists()


def test_cache_lookup_after_reopen(tmp_path):
    cache = ResourceCache(tmp_path)
    res = _resource()
    cache.put(res)
    reopened = ResourceCache(tmp_path)
    hit = reopened.lookup(res.url)
    assert hit is not None
    assert hit.decoded_body == res.decoded_body
    assert hit.key == res.key
    assert hit.content_type == res.content_type


def test_cache_by_hash(tmp_path):
    cache = ResourceCache(tmp_path)
    res = _resource()
    cache.put(res)
    again = ResourceCache(tmp_path).by_hash(res.key.url, res.key.content_hash)
    assert again is not None and again.decoded_body == res.decoded_body


def test_sidecar_path_traversal_blocked(tmp_path):
    cache = ResourceCache(tmp_path)
    assert cache.sidecar("aa", "../../etc/passwd") is None
    assert cache.sidecar("aa", "..") is None


def test_charset_from_content_type():
    res = _resource()
    assert res.charset == "utf-8"
    res.content_type = "application/javascript; charset=ISO-8859-1"
    assert res.charset == "ISO-8859-1"
