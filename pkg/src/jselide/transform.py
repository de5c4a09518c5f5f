"""Source-to-source rewriting: instrumented and elided JS variants, CSS elision.

All splicing happens on the encoded byte representation of the decoded body,
against the byte spans the analyzer reported, so output bytes outside the
edited spans are exactly the input bytes.

Instrumentation is reversible: the injected prologue and markers carry
sentinel comments, and `strip_instrumentation` removes them (and undoes the
block conversion of expression-bodied arrows) to recover the original text
byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from string import Template

from .analyzer import (
    FunctionUnit,
    ResourceAnalysis,
    ResourceKey,
    SourceSpan,
    analyze,
    content_hash,
)
from . import runtime as rt
from .runtime import RuntimeTemplates, default_templates

__all__ = [
    "AnalysisMismatch",
    "RangeError",
    "ElisionPolicy",
    "ElisionStats",
    "ElisionResult",
    "InstrumentedResource",
    "instrument",
    "strip_instrumentation",
    "elide",
    "elide_css",
]


class AnalysisMismatch(ValueError):
    """The supplied analysis does not describe this exact source."""


class RangeError(ValueError):
    """Byte ranges are overlapping, unsorted, or out of bounds."""


@dataclass(frozen=True)
class ElisionPolicy:
    """Knobs that keep the synchronous fallback contract sound.

    A unit is elided only when its body is strictly longer than the stub that
    would replace it plus `min_body_bytes`, so elision can never grow the
    resource; `allow_growth` drops that guard and elides every never-executed
    unit regardless of size. Accessor/constructor/async/generator bodies are
    skipped by default: the plain fetch-and-evaluate wrapper does not
    reproduce their execution semantics (per-kind wrappers exist but are
    opt-in).
    """

    min_body_bytes: int = 0
    skip_kinds: frozenset[str] = frozenset({"getter", "setter", "constructor"})
    skip_async: bool = True
    skip_generators: bool = True
    allow_growth: bool = False

    @classmethod
    def permissive(cls) -> "ElisionPolicy":
        """Elide everything never executed, as the measurement study did."""
        return cls(
            skip_kinds=frozenset(), skip_async=False, skip_generators=False,
            allow_growth=True,
        )


@dataclass
class ElisionStats:
    """Counts over one elision pass.

    `elided_functions` counts every never-executed, policy-eligible unit
    whose body left the served resource; a unit nested inside an elided
    ancestor rides along in the ancestor's sidecar and is counted once, not
    stubbed again. `elided_bytes` sums body spans of stubbed (outermost)
    units only, so it never exceeds `total_bytes` (the decoded resource
    size).
    """

    total_functions: int = 0
    elided_functions: int = 0
    skipped_functions: int = 0
    total_anonymous: int = 0
    elided_anonymous: int = 0
    total_bytes: int = 0
    elided_bytes: int = 0


@dataclass
class InstrumentedResource:
    key: ResourceKey
    body: str
    marker_count: int
    prologue_span: SourceSpan


@dataclass
class ElisionResult:
    key: ResourceKey
    body: str
    sidecars: dict[str, str] = field(default_factory=dict)
    stats: ElisionStats = field(default_factory=ElisionStats)


def _encoded(source: str, analysis: ResourceAnalysis) -> bytes:
    data = source.encode(analysis.charset)
    if content_hash(data) != analysis.key.content_hash:
        raise AnalysisMismatch(
            f"source hash does not match analysis key for {analysis.key.url}"
        )
    return data


def _require_parsed(analysis: ResourceAnalysis) -> None:
    if not analysis.parse_ok:
        raise AnalysisMismatch(
            f"resource was not parseable ({analysis.parse_error}); pass it through"
        )


def _splice(data: bytes, edits: list[tuple[int, int, bytes]]) -> bytes:
    """Rebuild `data` applying (offset, tie, text) insertions in order."""
    out = []
    pos = 0
    for off, _tie, text in sorted(edits, key=lambda e: (e[0], e[1])):
        out.append(data[pos:off])
        out.append(text)
        pos = off
    out.append(data[pos:])
    return b"".join(out)


def instrument(
    source: str,
    analysis: ResourceAnalysis,
    templates: RuntimeTemplates | None = None,
    beacon_url: str = rt.DEFAULT_BEACON_PATH,
) -> InstrumentedResource:
    """Produce the learning-phase variant of `source`.

    The coverage prologue is inserted at the top of the resource (after any
    hashbang and directive prologue, so strictness is preserved); one marker
    becomes the first statement of every unit's body, after that body's own
    directives. Expression-bodied arrows are converted to block bodies with
    an explicit ``return``.
    """
    _require_parsed(analysis)
    templates = templates or default_templates()
    data = _encoded(source, analysis)
    chash = analysis.key.content_hash

    prologue = rt.render_prologue(templates, analysis.key, beacon_url).encode("ascii")
    edits: list[tuple[int, int, bytes]] = [(analysis.prologue_offset, 0, prologue)]

    for u in analysis.units:
        if u.body_is_block:
            marker = rt.render_marker(templates, chash, u.id).encode("ascii")
            edits.append((u.marker_offset, 0, marker))
        else:
            marker = rt.render_marker(templates, chash, u.id, arrow=True).encode("ascii")
            edits.append((u.body_span.start, 0, b"{" + marker + b"return ("))
            edits.append((u.body_span.end, -u.body_span.start, b");}"))

    body = _splice(data, edits)
    return InstrumentedResource(
        key=analysis.key,
        body=body.decode(analysis.charset),
        marker_count=len(analysis.units),
        prologue_span=SourceSpan(
            analysis.prologue_offset, analysis.prologue_offset + len(prologue)
        ),
    )


def _pattern_from_template(template: str, groups: dict[str, str]) -> re.Pattern[bytes]:
    """Escape a rendered-template shape into a byte regex."""
    tokens = {name: f"\x00{i}\x00" for i, name in enumerate(groups)}
    shaped = Template(template).substitute(**tokens)
    pattern = re.escape(shaped)
    for name, tok in tokens.items():
        pattern = pattern.replace(re.escape(tok), groups[name])
    return re.compile(pattern.encode("ascii"))


def _marker_regex(templates: RuntimeTemplates, arrow: bool = False) -> re.Pattern[bytes]:
    tpl = templates.marker_tpl
    if arrow:
        tpl = tpl.replace(rt.MARKER_SENTINEL, rt.ARROW_SENTINEL, 1)
    return _pattern_from_template(
        tpl, {"COV_GLOBAL": r"__jscov_[0-9a-f]{8}", "FID": r"[0-9a-f]{1,16}"}
    )


def _prologue_regex(templates: RuntimeTemplates) -> re.Pattern[bytes]:
    # the prologue is one sentinel-tagged line; everything up to its newline
    sentinel = re.escape((";" + rt.PROLOGUE_SENTINEL).encode("ascii"))
    return re.compile(sentinel + rb"[^\n]*\n")


def strip_instrumentation(
    body: str,
    templates: RuntimeTemplates | None = None,
    charset: str = "utf-8",
) -> str:
    """Mechanically remove everything `instrument` injected.

    Relies only on the sentinel comments carried by the injected text, so it
    works from the instrumented text alone. Arrow block conversions are
    undone innermost-first against a single analysis of the instrumented
    text, tracking how each restoration shifts enclosing body ends.
    """
    templates = templates or default_templates()
    data = body.encode(charset)
    arrow_re = _marker_regex(templates, arrow=True)
    dummy = ResourceKey(url="about:strip", content_hash="0" * 64)

    if arrow_re.search(data):
        analysis = analyze(data.decode(charset), dummy, charset)
        if not analysis.parse_ok:
            raise AnalysisMismatch(f"instrumented text does not re-parse: {analysis.parse_error}")
        # undo conversions innermost-first; one analysis suffices because an
        # inner edit shifts only the END of enclosing bodies, by a tracked delta
        deltas: list[tuple[int, int]] = []  # (edit position, length change)
        for u in sorted(analysis.units, key=lambda u: -u.body_span.start):
            if u.kind != "arrow" or not u.body_is_block:
                continue
            s, e = u.body_span.start, u.body_span.end
            cur_e = e + sum(d for p, d in deltas if s < p < e)
            block = data[s:cur_e]
            m = arrow_re.match(block, 1)
            if not m or not block.startswith(b"return (", m.end()) or not block.endswith(b");}"):
                continue
            inner = block[m.end() + len(b"return (") : -len(b");}")]
            data = data[:s] + inner + data[cur_e:]
            deltas.append((s, len(inner) - (cur_e - s)))
        if arrow_re.search(data):
            raise AnalysisMismatch("unmatched arrow conversion sentinel")

    data = _marker_regex(templates).sub(b"", data)
    data = _prologue_regex(templates).sub(b"", data, count=1)
    return data.decode(charset)


def _eligible(u: FunctionUnit, policy: ElisionPolicy) -> bool:
    if u.kind in policy.skip_kinds:
        return False
    if u.is_async and policy.skip_async:
        return False
    if u.is_generator and policy.skip_generators:
        return False
    if u.scope_escape:
        # body reads super/new.target; a relocated wrapper cannot express it
        return False
    return True


def elide(
    source: str,
    analysis: ResourceAnalysis,
    executed: set[str],
    policy: ElisionPolicy | None = None,
    sidecar_url_base: str | None = None,
    templates: RuntimeTemplates | None = None,
) -> ElisionResult:
    """Replace never-executed function bodies with on-demand fallback stubs.

    Only the outermost of nested never-executed units is stubbed (the
    sidecar already carries the nested bodies); every other byte of the
    source is preserved verbatim.
    """
    _require_parsed(analysis)
    policy = policy or ElisionPolicy()
    templates = templates or default_templates()
    data = _encoded(source, analysis)
    if sidecar_url_base is None:
        sidecar_url_base = rt.sidecar_url_base(analysis.key.content_hash)

    known_ids = analysis.unit_ids()
    executed = set(executed) & known_ids

    stats = ElisionStats(
        total_functions=len(analysis.units),
        total_anonymous=sum(1 for u in analysis.units if u.is_anonymous),
        total_bytes=analysis.source_len,
    )

    stubbed: list[tuple[FunctionUnit, bytes]] = []
    stubbed_bodies: list[SourceSpan] = []
    sidecars: dict[str, str] = {}

    for u in analysis.units:  # ascending span.start: ancestors first
        inside_stubbed = any(s.contains(u.span) for s in stubbed_bodies)
        if u.id in executed:
            continue
        eligible = _eligible(u, policy)
        if inside_stubbed:
            if eligible:
                stats.elided_functions += 1
                if u.is_anonymous:
                    stats.elided_anonymous += 1
            continue
        if not eligible:
            stats.skipped_functions += 1
            continue
        stub = rt.render_stub(
            templates, f"{sidecar_url_base}/{u.id}", generator=u.is_generator
        ).encode("ascii")
        if not policy.allow_growth and len(u.body_span) <= len(stub) + policy.min_body_bytes:
            stats.skipped_functions += 1
            continue
        stubbed.append((u, stub))
        stubbed_bodies.append(u.body_span)
        stats.elided_functions += 1
        stats.elided_bytes += len(u.body_span)
        if u.is_anonymous:
            stats.elided_anonymous += 1
        body_text = data[u.body_span.start:u.body_span.end].decode(analysis.charset)
        sidecars[u.id] = rt.render_sidecar(
            templates, body_text, u.kind, u.is_async, u.is_generator, u.body_is_block
        )

    out = []
    pos = 0
    # body spans are pairwise disjoint but not in unit-span order (a unit in
    # a parameter default has its body before its owner's body)
    for u, stub in sorted(stubbed, key=lambda p: p[0].body_span.start):
        out.append(data[pos:u.body_span.start])
        out.append(stub)
        pos = u.body_span.end
    out.append(data[pos:])

    return ElisionResult(
        key=analysis.key,
        body=b"".join(out).decode(analysis.charset),
        sidecars=sidecars,
        stats=stats,
    )


def elide_css(css: str, used_ranges: list[SourceSpan]) -> str:
    """Keep only the byte ranges of `css` that were reported as applied."""
    data = css.encode("utf-8")
    prev_end = 0
    for span in used_ranges:
        if span.start < prev_end:
            raise RangeError(f"ranges overlap or are unsorted at {span.start}")
        if span.end > len(data):
            raise RangeError(f"range [{span.start}, {span.end}) exceeds {len(data)} bytes")
        prev_end = span.end
    kept = b"".join(data[s.start:s.end] for s in used_ranges)
    try:
        return kept.decode("utf-8")
    except UnicodeDecodeError as e:
        raise RangeError(f"ranges split a multi-byte sequence: {e}") from None
