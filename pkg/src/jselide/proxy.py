"""Intercepting proxy: serves instrumented or elided JS per phase and mode.

Request routing:

* ``POST <beacon path>``      ingest a coverage beacon, respond 204.
* ``GET <sidecar prefix>/<hash>/<id>``  serve one elided body file.
* anything else               fetch (or reuse) the origin snapshot and serve
                              it, substituting the instrumented or elided
                              variant for JS resources according to the
                              serve mode and learning phase.

Clients reach the proxy three ways: absolute-form requests (classic HTTP
proxy), origin-form requests with a Host header (DNS-mapped deployment), and
CONNECT tunnels that are intercepted by minting a leaf certificate for the
requested host.

Transformation is fail-open: any analysis or rewrite failure serves the
original bytes. A given resource variant is built at most once per coverage
fingerprint (single-flight) and persisted in the cache directory.
"""

from __future__ import annotations

import enum
import hashlib
import logging
import socket
import ssl
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .analyzer import ResourceAnalysis, ResourceKey, analyze, canonical_url
from .cache import (
    CachedResource,
    DecodeError,
    ResourceCache,
    UnsupportedEncoding,
    decode_body,
    is_javascript,
    transcode,
)
from .certs import CertificateMinter
from .runtime import DEFAULT_BEACON_PATH, SIDECAR_PATH_PREFIX, RuntimeTemplates, default_templates, sidecar_url_base
from .store import (
    CoverageBeacon,
    CoverageStore,
    MalformedBeacon,
    PhasePolicy,
    ResourcePhase,
    UnsupportedVersion,
)
from .transform import ElisionPolicy, elide, instrument

__all__ = ["ServeMode", "OriginUnreachable", "ProxyConfig", "ElideProxy"]

logger = logging.getLogger(__name__)

_HOP_BY_HOP = {
    "connection", "keep-alive", "proxy-authenticate", "proxy-authorization",
    "te", "trailers", "transfer-encoding", "upgrade",
    "content-length", "content-encoding",
}


class OriginUnreachable(RuntimeError):
    pass


class ServeMode(enum.Enum):
    ORIGINAL = "original"
    AUTO = "auto"
    FORCED_ELIDED = "forced-elided"


@dataclass
class ProxyConfig:
    mode: ServeMode = ServeMode.AUTO
    beacon_path: str = DEFAULT_BEACON_PATH
    sidecar_prefix: str = SIDECAR_PATH_PREFIX
    phase_policy: PhasePolicy = field(default_factory=PhasePolicy)
    elision_policy: ElisionPolicy = field(default_factory=ElisionPolicy)
    templates: RuntimeTemplates = field(default_factory=default_templates)
    first_party: tuple[str, ...] = ()
    origin_tls_verify: bool = True
    origin_timeout: float = 30.0
    default_scheme: str = "http"


class ElideProxy:
    """Proxy server bound to a coverage store and resource cache."""

    def __init__(
        self,
        store: CoverageStore,
        cache: ResourceCache,
        config: ProxyConfig | None = None,
        minter: CertificateMinter | None = None,
    ):
        self.store = store
        self.cache = cache
        self.config = config or ProxyConfig()
        self.minter = minter
        self._fetch_locks: dict[str, threading.Lock] = {}
        self._variant_locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._origin_ssl = ssl.create_default_context()
        if not self.config.origin_tls_verify:
            self._origin_ssl.check_hostname = False
            self._origin_ssl.verify_mode = ssl.CERT_NONE
        self._server: ThreadingHTTPServer | None = None

    # ------------------------------------------------------------------
    # origin side

    def _lock_for_url(self, url: str) -> threading.Lock:
        with self._locks_guard:
            return self._fetch_locks.setdefault(url, threading.Lock())

    def _lock_for_variant(self, chash: str, name: str) -> threading.Lock:
        with self._locks_guard:
            return self._variant_locks.setdefault((chash, name), threading.Lock())

    def fetch_origin(self, url: str, force: bool = False) -> CachedResource:
        """Return the cached snapshot of `url`, fetching the origin once."""
        curl = canonical_url(url)
        with self._lock_for_url(curl):
            if not force:
                hit = self.cache.lookup(curl)
                if hit is not None:
                    return hit
            req = urllib.request.Request(curl, headers={
                "User-Agent": "jselide-proxy/0.1",
                "Accept-Encoding": "gzip, identity",
            })
            try:
                with urllib.request.urlopen(
                    req, timeout=self.config.origin_timeout, context=self._origin_ssl
                ) as resp:
                    raw = resp.read()
                    status = resp.status
                    headers = [(k, v) for k, v in resp.headers.items()]
            except urllib.error.HTTPError as e:
                if e.code >= 500:
                    raise OriginUnreachable(f"origin returned {e.code} for {curl}") from None
                raw = e.read()
                status = e.code
                headers = [(k, v) for k, v in e.headers.items()]
            except (urllib.error.URLError, socket.timeout, OSError) as e:
                raise OriginUnreachable(f"cannot fetch {curl}: {e}") from None

            enc = "identity"
            for k, v in headers:
                if k.lower() == "content-encoding":
                    enc = v.strip().lower() or "identity"
            opaque = False
            try:
                body = decode_body(raw, enc)
                encoding = "identity" if enc in ("", "identity") else enc
            except (DecodeError, UnsupportedEncoding) as e:
                logger.warning("origin body for %s kept opaque: %s", curl, e)
                body, encoding, opaque = raw, enc, True

            content_type = None
            for k, v in headers:
                if k.lower() == "content-type":
                    content_type = v
            res = CachedResource(
                key=ResourceKey.for_body(curl, body),
                url=curl,
                status=status,
                headers=headers,
                decoded_body=body,
                original_encoding=encoding,
                content_type=content_type,
                fetched_at=time.time(),
                opaque=opaque,
            )
            self.cache.put(res)
            return res

    # ------------------------------------------------------------------
    # variants

    def _analysis_of(self, res: CachedResource) -> ResourceAnalysis | None:
        try:
            text = res.decoded_body.decode(res.charset)
            if text.encode(res.charset) != res.decoded_body:
                logger.warning("charset round-trip failed for %s; passing through", res.url)
                return None
        except (UnicodeDecodeError, LookupError):
            return None
        return analyze(text, res.key, res.charset)

    def _coverage_fingerprint(self, key: ResourceKey) -> str:
        ids = sorted(self.store.executed_ids(key))
        return hashlib.sha256("\n".join(ids).encode("ascii")).hexdigest()

    def instrumented_body(self, res: CachedResource) -> bytes | None:
        chash = res.key.content_hash
        with self._lock_for_variant(chash, "instrumented"):
            hit = self.cache.variant(chash, "instrumented")
            if hit is not None:
                return hit
            analysis = self._analysis_of(res)
            if analysis is None or not analysis.parse_ok:
                return None
            out = instrument(
                res.decoded_body.decode(res.charset), analysis,
                self.config.templates, self.config.beacon_path,
            )
            body = out.body.encode(res.charset)
            self.cache.put_variant(chash, "instrumented", body)
            return body

    def elided_body(self, res: CachedResource) -> bytes | None:
        chash = res.key.content_hash
        fingerprint = self._coverage_fingerprint(res.key)
        with self._lock_for_variant(chash, "elided"):
            stamp = self.cache.variant(chash, "elided.cov")
            if stamp is not None and stamp.decode("ascii", "replace") == fingerprint:
                hit = self.cache.variant(chash, "elided")
                if hit is not None:
                    return hit
            analysis = self._analysis_of(res)
            if analysis is None or not analysis.parse_ok:
                return None
            executed = set(self.store.executed_ids(res.key))
            result = elide(
                res.decoded_body.decode(res.charset), analysis, executed,
                self.config.elision_policy,
                sidecar_url_base(chash, self.config.sidecar_prefix),
                self.config.templates,
            )
            body = result.body.encode(res.charset)
            self.cache.put_variant(chash, "elided", body)
            self.cache.put_sidecars(chash, result.sidecars)
            self.cache.put_variant(chash, "elided.cov", fingerprint.encode("ascii"))
            return body

    def pick_variant(self, res: CachedResource, mode: ServeMode) -> tuple[str, bytes]:
        """Choose (variant name, decoded body) for one JS resource."""
        if mode is ServeMode.ORIGINAL:
            return "original", res.decoded_body
        try:
            if mode is ServeMode.AUTO:
                phase = self.store.phase(res.key, self.config.phase_policy)
                if phase is ResourcePhase.LEARNING:
                    body = self.instrumented_body(res)
                    return ("instrumented", body) if body is not None else ("original", res.decoded_body)
                body = self.elided_body(res)
                return ("elided", body) if body is not None else ("original", res.decoded_body)
            # forced elided: elide when any coverage exists, learn otherwise
            if self.store.beacon_count(res.key) > 0:
                body = self.elided_body(res)
                if body is not None:
                    return "elided", body
            body = self.instrumented_body(res)
            return ("instrumented", body) if body is not None else ("original", res.decoded_body)
        except Exception:
            logger.exception("transformation failed for %s; serving original", res.url)
            return "original", res.decoded_body

    # ------------------------------------------------------------------
    # server plumbing

    def make_server(self, listen: tuple[str, int]) -> ThreadingHTTPServer:
        proxy = self

        class Handler(_ProxyHandler):
            ctx = proxy

        server = ThreadingHTTPServer(listen, Handler)
        server.daemon_threads = True
        self._server = server
        return server

    def serve_forever(self, listen: tuple[str, int]) -> None:
        self.make_server(listen).serve_forever()


class _ProxyHandler(BaseHTTPRequestHandler):
    ctx: ElideProxy
    protocol_version = "HTTP/1.1"
    _tls_host: str | None = None

    # quieter logging than the default stderr prints
    def log_message(self, fmt, *args):  # noqa: N802
        logger.debug("%s - %s", self.address_string(), fmt % args)

    # ------------------------------------------------------------------
    def _send(self, status: int, headers: list[tuple[str, str]], body: bytes = b"") -> None:
        self.send_response(status)
        seen_length = False
        for k, v in headers:
            if k.lower() == "content-length":
                seen_length = True
            self.send_header(k, v)
        if not seen_length and (body or status not in (204, 304)):
            self.send_header("Content-Length", str(len(body)))
        elif status in (204, 304) and not body:
            pass
        self.end_headers()
        if body and self.command != "HEAD":
            self.wfile.write(body)

    def _cors_headers(self) -> list[tuple[str, str]]:
        return [
            ("Access-Control-Allow-Origin", "*"),
            ("Access-Control-Allow-Methods", "POST, OPTIONS"),
            ("Access-Control-Allow-Headers", "Content-Type"),
        ]

    # ------------------------------------------------------------------
    def do_OPTIONS(self):  # noqa: N802
        cfg = self.ctx.config
        if self._route_path() == cfg.beacon_path:
            self._send(204, self._cors_headers())
        else:
            self._send(204, [("Allow", "GET, HEAD, POST, OPTIONS, CONNECT")])

    def do_POST(self):  # noqa: N802
        cfg = self.ctx.config
        if self._route_path() == cfg.beacon_path:
            self._handle_beacon()
            return
        self._proxy_request()

    def do_GET(self):  # noqa: N802
        path = self._route_path()
        cfg = self.ctx.config
        if path.startswith(cfg.sidecar_prefix + "/"):
            self._handle_sidecar(path)
            return
        self._proxy_request()

    do_HEAD = do_GET  # noqa: N815

    def do_CONNECT(self):  # noqa: N802
        if self.ctx.minter is None:
            self._send(501, [], b"TLS interception requires a CA\n")
            return
        host = self.path.rsplit(":", 1)[0]
        try:
            tls_ctx = self.ctx.minter.context_for(host)
            self.send_response(200, "Connection Established")
            self.end_headers()
            tls = tls_ctx.wrap_socket(self.connection, server_side=True)
        except (ssl.SSLError, OSError) as e:
            logger.warning("CONNECT interception failed for %s: %s", self.path, e)
            self.close_connection = True
            return
        # swap streams; the request loop keeps serving inside the tunnel
        self.connection = tls
        self.rfile = tls.makefile("rb", -1)
        self.wfile = tls.makefile("wb", 0)
        self._tls_host = self.path
        self.close_connection = False

    # ------------------------------------------------------------------
    def _route_path(self) -> str:
        path = self.path
        if path.startswith("http://") or path.startswith("https://"):
            rest = path.split("://", 1)[1]
            slash = rest.find("/")
            path = rest[slash:] if slash >= 0 else "/"
        return path.split("?", 1)[0]

    def _request_url(self) -> str:
        if self.path.startswith("http://") or self.path.startswith("https://"):
            return self.path
        host = self.headers.get("Host")
        scheme = self.ctx.config.default_scheme
        if self._tls_host is not None:
            scheme = "https"
            if not host:
                host = self._tls_host.rsplit(":", 1)[0]
        if not host:
            raise ValueError("cannot resolve origin: no Host header")
        return f"{scheme}://{host}{self.path}"

    # ------------------------------------------------------------------
    def _handle_beacon(self) -> None:
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = self.rfile.read(length) if length else b""
            beacon = CoverageBeacon.from_json(payload)
            self.ctx.store.record_beacon(beacon)
        except (UnsupportedVersion, MalformedBeacon, ValueError) as e:
            self._send(400, self._cors_headers(), f"bad beacon: {e}\n".encode())
            return
        self._send(204, self._cors_headers())

    def _handle_sidecar(self, path: str) -> None:
        cfg = self.ctx.config
        rest = path[len(cfg.sidecar_prefix) + 1 :]
        parts = rest.split("/")
        if len(parts) != 2 or not all(parts):
            self._send(404, [], b"unknown sidecar\n")
            return
        chash, fid = parts
        body = self.ctx.cache.sidecar(chash, fid)
        if body is None:
            self._send(404, [], b"unknown sidecar\n")
            return
        self._send(200, [
            ("Content-Type", "application/javascript"),
            ("Cache-Control", "no-store"),
            *self._cors_headers(),
        ], body)

    def _proxy_request(self) -> None:
        ctx = self.ctx
        try:
            url = self._request_url()
        except ValueError as e:
            self._send(400, [], f"{e}\n".encode())
            return
        try:
            res = ctx.fetch_origin(url)
        except OriginUnreachable as e:
            self._send(502, [], f"origin unreachable: {e}\n".encode())
            return

        variant = "original"
        body = res.decoded_body
        if not res.opaque and is_javascript(res.content_type):
            variant, body = ctx.pick_variant(res, ctx.config.mode)

        if res.opaque:
            wire = body
            encoding = res.original_encoding
        else:
            encoding = res.original_encoding
            try:
                wire = transcode(body, encoding)
            except UnsupportedEncoding:
                wire, encoding = body, "identity"

        headers: list[tuple[str, str]] = []
        for k, v in res.headers:
            lk = k.lower()
            if lk in _HOP_BY_HOP:
                continue
            if variant != "original" and lk in ("etag", "last-modified"):
                continue
            headers.append((k, v))
        if encoding not in ("identity", ""):
            headers.append(("Content-Encoding", encoding))
        headers.append(("Content-Length", str(len(wire))))
        headers.append(("X-Jscov-Variant", variant))
        self._send(res.status, headers, wire)
