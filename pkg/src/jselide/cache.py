"""Origin response snapshots: content-encoding codecs and the resource cache.

Cache layout on disk, one directory per content hash:

    <dir>/<content_hash>/original       decoded body bytes
    <dir>/<content_hash>/instrumented   learning variant (when built)
    <dir>/<content_hash>/elided         elided variant (when built)
    <dir>/<content_hash>/meta           response metadata JSON
    <dir>/<content_hash>/sidecars/<id>  elided body files
    <dir>/urls.json                     canonical URL -> content hash index

Bodies are stored decoded; responses are re-encoded on the way out with
`transcode`. Brotli support depends on a brotli module being importable;
without one, brotli origin responses are kept opaque and never transformed.
"""

from __future__ import annotations

import gzip
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .analyzer import ResourceKey, canonical_url, content_hash

try:  # optional; not installable in every environment
    import brotli  # type: ignore
except ImportError:  # pragma: no cover
    brotli = None

__all__ = [
    "DecodeError",
    "UnsupportedEncoding",
    "CachedResource",
    "ResourceCache",
    "decode_body",
    "transcode",
    "is_javascript",
]


class DecodeError(ValueError):
    pass


class UnsupportedEncoding(ValueError):
    pass


JS_CONTENT_TYPES = (
    "application/javascript",
    "application/x-javascript",
    "text/javascript",
    "application/ecmascript",
    "text/ecmascript",
)


def is_javascript(content_type: str | None) -> bool:
    if not content_type:
        return False
    mime = content_type.split(";", 1)[0].strip().lower()
    return mime in JS_CONTENT_TYPES


def decode_body(data: bytes, encoding: str) -> bytes:
    """Remove a Content-Encoding; raises on tokens we cannot decode."""
    enc = (encoding or "identity").strip().lower()
    if enc in ("", "identity"):
        return data
    if enc == "gzip" or enc == "x-gzip":
        try:
            return gzip.decompress(data)
        except (OSError, EOFError) as e:
            raise DecodeError(f"invalid gzip body: {e}") from None
    if enc == "br":
        if brotli is None:
            raise UnsupportedEncoding("brotli codec not available")
        try:
            return brotli.decompress(data)
        except Exception as e:  # brotli raises its own error type
            raise DecodeError(f"invalid brotli body: {e}") from None
    raise UnsupportedEncoding(f"unsupported content-encoding {encoding!r}")


def transcode(decoded_body: bytes, target_encoding: str) -> bytes:
    """Encode a decoded body for the wire; inverse of `decode_body`."""
    enc = (target_encoding or "identity").strip().lower()
    if enc in ("", "identity"):
        return decoded_body
    if enc == "gzip" or enc == "x-gzip":
        # fixed mtime keeps repeated responses byte-identical
        return gzip.compress(decoded_body, mtime=0)
    if enc == "br":
        if brotli is None:
            raise UnsupportedEncoding("brotli codec not available")
        return brotli.compress(decoded_body)
    raise UnsupportedEncoding(f"unsupported content-encoding {target_encoding!r}")


@dataclass
class CachedResource:
    """Snapshot of one origin response, body stored decoded."""

    key: ResourceKey
    url: str
    status: int
    headers: list[tuple[str, str]]
    decoded_body: bytes
    original_encoding: str  # "identity" | "gzip" | "br"; raw token if opaque
    content_type: str | None
    fetched_at: float
    opaque: bool = False  # body could not be decoded; never transform

    @property
    def charset(self) -> str:
        if self.content_type and "charset=" in self.content_type:
            cs = self.content_type.split("charset=", 1)[1].split(";")[0].strip().strip('"')
            if cs:
                return cs
        return "utf-8"

    def header(self, name: str) -> str | None:
        lname = name.lower()
        for k, v in self.headers:
            if k.lower() == lname:
                return v
        return None


class ResourceCache:
    """Disk-backed cache of origin snapshots and their transformed variants."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._url_index: dict[str, str] = {}
        self._mem: dict[str, CachedResource] = {}
        self._load_index()

    # ------------------------------------------------------------------
    # index

    def _index_path(self) -> Path:
        return self.root / "urls.json"

    def _load_index(self) -> None:
        try:
            self._url_index = json.loads(self._index_path().read_text())
        except (OSError, json.JSONDecodeError):
            self._url_index = {}

    def _save_index_locked(self) -> None:
        tmp = self._index_path().with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self._url_index, indent=0, sort_keys=True))
        os.replace(tmp, self._index_path())

    # ------------------------------------------------------------------
    # storage

    def _resource_dir(self, chash: str) -> Path:
        return self.root / chash

    def put(self, res: CachedResource) -> None:
        with self._lock:
            d = self._resource_dir(res.key.content_hash)
            d.mkdir(parents=True, exist_ok=True)
            self._atomic_write(d / "original", res.decoded_body)
            meta = {
                "url": res.url,
                "status": res.status,
                "headers": res.headers,
                "original_encoding": res.original_encoding,
                "content_type": res.content_type,
                "fetched_at": res.fetched_at,
                "opaque": res.opaque,
            }
            self._atomic_write(d / "meta", json.dumps(meta, indent=1).encode("utf-8"))
            self._url_index[res.key.url] = res.key.content_hash
            self._save_index_locked()
            self._mem[res.key.url] = res

    def lookup(self, url: str) -> CachedResource | None:
        curl = canonical_url(url)
        with self._lock:
            if curl in self._mem:
                return self._mem[curl]
            chash = self._url_index.get(curl)
            if chash is None:
                return None
            res = self._read(curl, chash)
            if res is not None:
                self._mem[curl] = res
            return res

    def by_hash(self, url: str, chash: str) -> CachedResource | None:
        """Snapshot for a known (url, hash) pair, bypassing the URL index."""
        with self._lock:
            hit = self._mem.get(url)
            if hit is not None and hit.key.content_hash == chash:
                return hit
            return self._read(url, chash)

    def _read(self, url: str, chash: str) -> CachedResource | None:
        d = self._resource_dir(chash)
        try:
            body = (d / "original").read_bytes()
            meta = json.loads((d / "meta").read_text())
        except (OSError, json.JSONDecodeError):
            return None
        return CachedResource(
            key=ResourceKey(url=url, content_hash=chash),
            url=meta.get("url", url),
            status=int(meta.get("status", 200)),
            headers=[(k, v) for k, v in meta.get("headers", [])],
            decoded_body=body,
            original_encoding=meta.get("original_encoding", "identity"),
            content_type=meta.get("content_type"),
            fetched_at=float(meta.get("fetched_at", time.time())),
            opaque=bool(meta.get("opaque", False)),
        )

    # ------------------------------------------------------------------
    # transformed variants

    def variant(self, chash: str, name: str) -> bytes | None:
        path = self._resource_dir(chash) / name
        try:
            return path.read_bytes()
        except OSError:
            return None

    def put_variant(self, chash: str, name: str, body: bytes) -> None:
        with self._lock:
            d = self._resource_dir(chash)
            d.mkdir(parents=True, exist_ok=True)
            self._atomic_write(d / name, body)

    def put_sidecars(self, chash: str, sidecars: dict[str, str]) -> None:
        with self._lock:
            d = self._resource_dir(chash) / "sidecars"
            d.mkdir(parents=True, exist_ok=True)
            for fid, text in sidecars.items():
                self._atomic_write(d / fid, text.encode("utf-8"))

    def sidecar(self, chash: str, fid: str) -> bytes | None:
        if "/" in fid or "\\" in fid or fid in (".", ".."):
            return None
        path = self._resource_dir(chash) / "sidecars" / fid
        try:
            return path.read_bytes()
        except OSError:
            return None

    def urls(self) -> list[str]:
        with self._lock:
            return sorted(self._url_index)

    @staticmethod
    def _atomic_write(path: Path, data: bytes) -> None:
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
