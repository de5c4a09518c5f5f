import gzip
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

CORPUS_DIR = Path(__file__).parent / "corpus"


@pytest.fixture(scope="session")
def corpus_labels() -> dict:
    return json.loads((CORPUS_DIR / "labels.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus_files(corpus_labels) -> dict[str, bytes]:
    return {
        name: (CORPUS_DIR / name).read_bytes()
        for name in corpus_labels
    }


class OriginHandler(BaseHTTPRequestHandler):
    """Minimal origin: serves a dict of path -> (content_type, body, encoding)."""

    server_version = "OriginServer/1.0"
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):
        pass

    def do_GET(self):
        origin = self.server  # type: ignore[assignment]
        path = self.path.split("?", 1)[0]
        with origin.lock:
            origin.hits[path] = origin.hits.get(path, 0) + 1
        entry = origin.resources.get(path)
        if entry is None:
            body = b"not found\n"
            self.send_response(404)
            self.send_header("Content-Type", "text/plain")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        content_type, body, encoding = entry
        if origin.fail_with_500:
            self.send_response(500)
            self.send_header("Content-Length", "0")
            self.end_headers()
            return
        wire = gzip.compress(body, mtime=0) if encoding == "gzip" else body
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        if encoding != "identity":
            self.send_header("Content-Encoding", encoding)
        self.send_header("Content-Length", str(len(wire)))
        self.end_headers()
        self.wfile.write(wire)


class OriginServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self):
        super().__init__(("127.0.0.1", 0), OriginHandler)
        self.resources: dict[str, tuple[str, bytes, str]] = {}
        self.hits: dict[str, int] = {}
        self.lock = threading.Lock()
        self.fail_with_500 = False

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.server_address[1]}"

    def add_js(self, path: str, body: str, encoding: str = "identity"):
        self.resources[path] = ("application/javascript", body.encode(), encoding)

    def add(self, path: str, content_type: str, body: bytes, encoding: str = "identity"):
        self.resources[path] = (content_type, body, encoding)


@pytest.fixture()
def origin():
    server = OriginServer()
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


@pytest.fixture()
def tls_origin(tmp_path_factory):
    from jselide.certs import CertificateMinter, generate_ca

    server = OriginServer()
    ca_cert, ca_key = generate_ca("test origin CA")
    minter = CertificateMinter(ca_cert, ca_key, workdir=tmp_path_factory.mktemp("origin-certs"))
    ctx = minter.context_for("127.0.0.1")
    server.socket = ctx.wrap_socket(server.socket, server_side=True)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()
