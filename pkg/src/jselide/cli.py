"""Command-line entry points.

Subcommands:

* ``serve``      run the intercepting proxy.
* ``analyze``    print the function-unit inventory of a JS file as JSON.
* ``instrument`` write the learning-phase variant of a JS file.
* ``elide``      write the elided variant given a coverage id list.
* ``report``     export per-resource and per-page statistics as CSV.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analyzer import ResourceKey, analyze
from .cache import ResourceCache
from .certs import CertificateMinter, generate_ca
from .proxy import ElideProxy, ProxyConfig, ServeMode
from .report import new_id_rate, page_report, write_page_csv
from .runtime import DEFAULT_BEACON_PATH, sidecar_url_base
from .store import CoverageStore, PhasePolicy
from .transform import ElisionPolicy, elide, instrument

logger = logging.getLogger(__name__)


def _file_key(path: Path, body: bytes) -> ResourceKey:
    return ResourceKey.for_body(path.resolve().as_uri(), body)


def _load_analysis(path: Path):
    body = path.read_bytes()
    source = body.decode("utf-8")
    key = _file_key(path, body)
    return source, analyze(source, key)


def cmd_analyze(args) -> int:
    source, analysis = _load_analysis(Path(args.file))
    doc = {
        "url": analysis.key.url,
        "content_hash": analysis.key.content_hash,
        "parse_ok": analysis.parse_ok,
        "source_len": analysis.source_len,
        "units": [
            {
                "id": u.id,
                "kind": u.kind,
                "name": u.name,
                "span": [u.span.start, u.span.end],
                "body_span": [u.body_span.start, u.body_span.end],
                "is_anonymous": u.is_anonymous,
                "is_async": u.is_async,
                "is_generator": u.is_generator,
                "depth": u.depth,
            }
            for u in analysis.units
        ],
    }
    if not analysis.parse_ok:
        doc["parse_error"] = analysis.parse_error
    json.dump(doc, sys.stdout, indent=2)
    print()
    return 0 if analysis.parse_ok else 1


def cmd_instrument(args) -> int:
    source, analysis = _load_analysis(Path(args.file))
    if not analysis.parse_ok:
        print(f"cannot instrument: {analysis.parse_error}", file=sys.stderr)
        return 1
    out = instrument(source, analysis, beacon_url=args.beacon_url)
    text = out.body
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{out.marker_count} markers inserted", file=sys.stderr)
    return 0


def cmd_elide(args) -> int:
    source, analysis = _load_analysis(Path(args.file))
    if not analysis.parse_ok:
        print(f"cannot elide: {analysis.parse_error}", file=sys.stderr)
        return 1
    executed: set[str] = set()
    if args.coverage:
        raw = Path(args.coverage).read_text()
        try:
            doc = json.loads(raw)
            executed = set(doc["ids"] if isinstance(doc, dict) else doc)
        except json.JSONDecodeError:
            executed = {line.strip() for line in raw.splitlines() if line.strip()}
    policy = ElisionPolicy.permissive() if args.permissive else ElisionPolicy()
    base = args.sidecar_base or sidecar_url_base(analysis.key.content_hash)
    result = elide(source, analysis, executed, policy, base)
    if args.out:
        Path(args.out).write_text(result.body)
    else:
        sys.stdout.write(result.body)
    if args.sidecar_dir:
        d = Path(args.sidecar_dir)
        d.mkdir(parents=True, exist_ok=True)
        for fid, text in result.sidecars.items():
            (d / fid).write_text(text)
    s = result.stats
    print(
        f"functions: {s.total_functions} total, {s.elided_functions} elided, "
        f"{s.skipped_functions} skipped; bytes: {s.total_bytes} total, "
        f"{s.elided_bytes} elided; sidecars: {len(result.sidecars)}",
        file=sys.stderr,
    )
    return 0


def cmd_serve(args) -> int:
    host, _, port = args.listen.rpartition(":")
    listen = (host or "127.0.0.1", int(port))
    store = CoverageStore(path=args.store)
    cache = ResourceCache(args.cache)
    minter = None
    if args.ca_cert and args.ca_key:
        ca_cert, ca_key = Path(args.ca_cert), Path(args.ca_key)
        if not ca_cert.exists():
            cert_pem, key_pem = generate_ca()
            ca_cert.parent.mkdir(parents=True, exist_ok=True)
            ca_cert.write_bytes(cert_pem)
            ca_key.write_bytes(key_pem)
            logger.info("generated new CA at %s", ca_cert)
        minter = CertificateMinter.from_files(ca_cert, ca_key)
    config = ProxyConfig(
        mode=ServeMode(args.mode),
        phase_policy=PhasePolicy(min_beacons=args.min_beacons),
        elision_policy=ElisionPolicy.permissive() if args.permissive else ElisionPolicy(),
        first_party=tuple(args.first_party or ()),
        origin_tls_verify=not args.origin_insecure,
    )
    proxy = ElideProxy(store, cache, config, minter)
    print(f"listening on {listen[0]}:{listen[1]} mode={args.mode} "
          f"store={args.store} cache={args.cache}", file=sys.stderr)
    try:
        proxy.serve_forever(listen)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_report(args) -> int:
    store = CoverageStore.load(args.store) if Path(args.store).exists() else CoverageStore()
    cache = ResourceCache(args.cache)
    pages: set[str] = set()
    for rec in store.records():
        pages.update(rec.pages)
    if args.page:
        pages = {args.page}
    wrote_any = False
    out = Path(args.out)
    for i, page in enumerate(sorted(pages)):
        report = page_report(store, cache, page, tuple(args.first_party or ()))
        if not report.resources:
            continue
        target = out if len(pages) == 1 else out.with_name(f"{out.stem}.{i}{out.suffix}")
        cdf = write_page_csv(report, target)
        print(f"{page}: {len(report.resources)} resources -> {target} (+ {cdf})", file=sys.stderr)
        wrote_any = True
    rates = new_id_rate(store)
    print(
        f"resources with ids first seen after beacon 1: "
        f"{100.0 * rates.share_with_late_ids:.1f}%",
        file=sys.stderr,
    )
    if not wrote_any:
        print("no resources matched any page", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jselide")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the intercepting proxy")
    p.add_argument("--listen", default="127.0.0.1:8899", help="host:port")
    p.add_argument("--mode", choices=[m.value for m in ServeMode], default="auto")
    p.add_argument("--store", default="jscov-store.txt")
    p.add_argument("--cache", default="jscov-cache")
    p.add_argument("--ca-cert", help="CA certificate PEM (created if missing)")
    p.add_argument("--ca-key", help="CA private key PEM")
    p.add_argument("--first-party", action="append", metavar="PATTERN")
    p.add_argument("--min-beacons", type=int, default=5)
    p.add_argument("--permissive", action="store_true",
                   help="elide every never-executed unit regardless of size/kind")
    p.add_argument("--origin-insecure", action="store_true",
                   help="skip TLS verification towards origins")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("analyze", help="inventory function units of a JS file")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("instrument", help="produce the learning-phase variant")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--beacon-url", default=DEFAULT_BEACON_PATH)
    p.set_defaults(func=cmd_instrument)

    p = sub.add_parser("elide", help="produce the elided variant")
    p.add_argument("file")
    p.add_argument("--coverage", help="executed id list (JSON array or one id per line)")
    p.add_argument("--out")
    p.add_argument("--sidecar-dir")
    p.add_argument("--sidecar-base")
    p.add_argument("--permissive", action="store_true")
    p.set_defaults(func=cmd_elide)

    p = sub.add_parser("report", help="export superfluous-code statistics")
    p.add_argument("--store", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--page", help="restrict to one page URL")
    p.add_argument("--first-party", action="append", metavar="PATTERN")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
