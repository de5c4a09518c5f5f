"""Function-unit inventory of JavaScript resources.

`analyze` parses a decoded JS body and reports every function-like unit
(declarations, function expressions, arrows, methods, accessors,
constructors) with byte-accurate spans, an anonymity flag, and a stable
identifier derived from the resource content hash. Spans are measured in
bytes of the decoded body under the resource charset so that downstream
splicing can operate on raw bytes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from urllib.parse import urlsplit, urlunsplit

from .jslex import JsSyntaxError
from .jsparse import parse_units

__all__ = [
    "ParseError",
    "SourceSpan",
    "FunctionUnit",
    "ResourceKey",
    "ResourceAnalysis",
    "FUNCTION_KINDS",
    "analyze",
    "function_id",
    "content_hash",
    "canonical_url",
]

# Syntactically invalid input; alias so callers need not know the lexer.
ParseError = JsSyntaxError

FUNCTION_KINDS = frozenset(
    {"declaration", "expression", "arrow", "method", "getter", "setter", "constructor"}
)

_ASCII_TRANSPARENT = {
    "utf-8", "utf8", "ascii", "us-ascii", "latin-1", "latin1", "iso-8859-1",
    "iso8859-1", "cp1252", "windows-1252",
}


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Half-open byte range [start, end) into the decoded resource body."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True, slots=True)
class FunctionUnit:
    """One function-like syntactic unit.

    The trailing fields beyond the core contract exist for the rewriter:
    `marker_offset` is the byte position where a statement can be inserted
    without displacing the body's directive prologue, `body_is_block`
    distinguishes expression-bodied arrows, and `scope_escape` flags bodies
    whose meaning cannot survive relocation into a wrapper (``super`` /
    ``new.target`` in the unit's own scope).
    """

    id: str
    kind: str
    name: str | None
    span: SourceSpan
    body_span: SourceSpan
    is_anonymous: bool
    is_async: bool
    is_generator: bool
    depth: int
    body_is_block: bool = True
    marker_offset: int = 0
    scope_escape: bool = False


def canonical_url(url: str) -> str:
    """Absolute URL with the fragment dropped and scheme/host lowercased."""
    parts = urlsplit(url)
    netloc = parts.netloc
    if "@" in netloc:
        creds, _, hostport = netloc.rpartition("@")
        netloc = creds + "@" + hostport.lower()
    else:
        netloc = netloc.lower()
    return urlunsplit((parts.scheme.lower(), netloc, parts.path, parts.query, ""))


def content_hash(body: bytes) -> str:
    return hashlib.sha256(body).hexdigest()


@dataclass(frozen=True, slots=True)
class ResourceKey:
    """Identity of one resource variant: canonical URL plus body digest."""

    url: str
    content_hash: str

    @classmethod
    def for_body(cls, url: str, body: bytes) -> "ResourceKey":
        return cls(url=canonical_url(url), content_hash=content_hash(body))


@dataclass(slots=True)
class ResourceAnalysis:
    key: ResourceKey
    units: list[FunctionUnit] = field(default_factory=list)
    source_len: int = 0
    parse_ok: bool = True
    charset: str = "utf-8"
    prologue_offset: int = 0
    parse_error: str | None = None

    def unit_ids(self) -> set[str]:
        return {u.id for u in self.units}


def function_id(key: ResourceKey, unit_start: int, unit_kind: str) -> str:
    """Stable short identifier for the unit starting at `unit_start`.

    Derived from the content digest so identical bytes re-served later keep
    their identifiers while any origin change invalidates them. 16 hex chars:
    URL-safe and safe inside a JS string literal.
    """
    raw = f"{key.content_hash}:{unit_start}:{unit_kind}".encode("ascii")
    return hashlib.sha256(raw).hexdigest()[:16]


def _byte_index(source: str, charset: str) -> list[int] | None:
    """Prefix map from string index to byte offset; None when they coincide."""
    if charset.lower() in _ASCII_TRANSPARENT and source.isascii():
        return None
    offsets = [0] * (len(source) + 1)
    acc = 0
    for i, ch in enumerate(source):
        offsets[i] = acc
        acc += len(ch.encode(charset))
    offsets[len(source)] = acc
    return offsets


def analyze(source: str, key: ResourceKey, charset: str = "utf-8") -> ResourceAnalysis:
    """Inventory every function-like unit of `source`.

    Returns a flagged analysis (`parse_ok=False`, no units) for resources the
    parser rejects; such resources must be passed through untransformed.
    """
    try:
        body_bytes_len = len(source.encode(charset))
    except (UnicodeEncodeError, LookupError) as e:
        return ResourceAnalysis(
            key=key, units=[], source_len=0, parse_ok=False,
            charset=charset, parse_error=f"unencodable source: {e}",
        )
    try:
        raw_units, prologue_off = parse_units(source)
    except (ParseError, RecursionError) as e:
        return ResourceAnalysis(
            key=key, units=[], source_len=body_bytes_len, parse_ok=False,
            charset=charset, parse_error=str(e),
        )

    to_byte = _byte_index(source, charset)
    conv = (lambda i: i) if to_byte is None else (lambda i: to_byte[i])

    units: list[FunctionUnit] = []
    for ru in raw_units:
        start_b = conv(ru.start)
        units.append(FunctionUnit(
            id=function_id(key, start_b, ru.kind),
            kind=ru.kind,
            name=ru.name,
            span=SourceSpan(start_b, conv(ru.end)),
            body_span=SourceSpan(conv(ru.body_start), conv(ru.body_end)),
            is_anonymous=ru.name is None,
            is_async=ru.is_async,
            is_generator=ru.is_generator,
            depth=ru.depth,
            body_is_block=ru.body_is_block,
            marker_offset=conv(ru.marker_offset),
            scope_escape=ru.scope_escape,
        ))

    ids = [u.id for u in units]
    if len(set(ids)) != len(ids):  # truncated-digest collision; effectively unreachable
        raise RuntimeError(f"function id collision in {key.url}")

    return ResourceAnalysis(
        key=key,
        units=units,
        source_len=body_bytes_len,
        parse_ok=True,
        charset=charset,
        prologue_offset=conv(prologue_off),
    )
