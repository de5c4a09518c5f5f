"""Template rendering: all substituted templates must be valid JS."""

from jselide.analyzer import ResourceKey, analyze
from jselide.runtime import (
    coverage_global,
    default_templates,
    render_marker,
    render_prologue,
    render_sidecar,
    render_stub,
    sidecar_url_base,
)

KEY = ResourceKey.for_body("https://example.com/app.js?v=1", b"function f(){}")
HASH = KEY.content_hash


def _parses(source: str, sloppy_wrap: bool = False) -> bool:
    key = ResourceKey.for_body("tpl://x", source.encode())
    return analyze(source, key).parse_ok


def test_prologue_parses_in_both_modes():
    text = render_prologue(default_templates(), KEY, "/__jscov__/beacon")
    assert _parses(text)
    assert _parses('"use strict";\n' + text)
    assert text.endswith("\n")
    assert "\n" not in text[:-1]  # single line: stripping is line-safe


def test_prologue_carries_key_and_global():
    text = render_prologue(default_templates(), KEY, "/b")
    assert coverage_global(HASH) in text
    assert KEY.url in text
    assert HASH in text


def test_marker_parses_and_is_guarded():
    text = render_marker(default_templates(), HASH, "abcdef0123456789")
    g = coverage_global(HASH)
    assert _parses("function t(){" + text + "}")
    assert _parses('"use strict";function t(){' + text + "}")
    assert f'typeof {g}!=="undefined"' in text
    assert text.startswith(";")
    assert text.endswith(";")


def test_stub_parses_as_function_body():
    stub = render_stub(default_templates(), "/__jscov__/body/h/i")
    assert _parses("function t()" + stub)
    assert _parses('"use strict";var t = () => ' + stub + ";")
    assert "/__jscov__/body/h/i" in stub


def test_generator_stub_delegates():
    stub = render_stub(default_templates(), "/u", generator=True)
    assert stub.startswith("{return yield*eval(")
    assert _parses("function* t()" + stub)


def test_sidecar_wrappers_parse():
    cases = [
        ("{return a+b}", "declaration", False, False, True),
        ("{return this.x}", "method", False, False, True),
        ("{yield 1;}", "method", False, True, True),
        ("{await p;}", "expression", True, False, True),
        ("{yield await p;}", "method", True, True, True),
        ("{return 1}", "arrow", False, False, True),
        ("x + 1", "arrow", False, False, False),
        ("x + 1", "arrow", True, False, False),
    ]
    for body, kind, is_async, is_gen, is_block in cases:
        text = render_sidecar(default_templates(), body, kind, is_async, is_gen, is_block)
        assert _parses(text), text


def test_sidecar_wrapper_shapes():
    t = default_templates()
    assert render_sidecar(t, "{return 1}", "declaration", False, False, True) == \
        "(function(){return 1}).apply(this,arguments);"
    assert render_sidecar(t, "x+1", "arrow", False, False, False) == "(()=>(x+1))();"
    assert render_sidecar(t, "{return 1}", "arrow", False, False, True) == "(()=>{return 1})();"
    assert render_sidecar(t, "{await p}", "method", True, False, True) == \
        "(async function(){await p}).apply(this,arguments);"
    assert render_sidecar(t, "{yield 1}", "method", False, True, True) == \
        "(function*(){yield 1}).apply(this,arguments);"


def test_coverage_global_differs_per_resource():
    other = ResourceKey.for_body("https://example.com/app.js", b"function g(){}")
    assert coverage_global(HASH) != coverage_global(other.content_hash)


def test_sidecar_url_base_shape():
    assert sidecar_url_base("aa" * 32) == "/__jscov__/body/" + "aa" * 32
