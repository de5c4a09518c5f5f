"""Analyzer contract: spans, kinds, anonymity, ids, purity."""

import pytest

from jselide.analyzer import (
    FUNCTION_KINDS,
    ResourceKey,
    SourceSpan,
    analyze,
    canonical_url,
    function_id,
)

KEY = ResourceKey.for_body("https://example.com/app.js", b"function f(){return 1}")


def _analyzed(source: str, url: str = "https://example.com/app.js"):
    key = ResourceKey.for_body(url, source.encode())
    return analyze(source, key)


def test_simple_declaration_spans():
    a = _analyzed("function f(){return 1}")
    assert a.parse_ok
    assert len(a.units) == 1
    u = a.units[0]
    assert u.kind == "declaration"
    assert u.name == "f"
    assert not u.is_anonymous
    assert (u.span.start, u.span.end) == (0, 22)
    assert (u.body_span.start, u.body_span.end) == (12, 22)


def test_arrow_expression_spans():
    a = _analyzed("var g = () => 1")
    assert len(a.units) == 1
    u = a.units[0]
    assert u.kind == "arrow"
    assert u.is_anonymous
    assert (u.span.start, u.span.end) == (8, 15)
    assert (u.body_span.start, u.body_span.end) == (14, 15)
    assert not u.body_is_block


def test_no_functions():
    a = _analyzed("var x = 3;")
    assert a.parse_ok
    assert a.units == []


def test_parse_error_flags_resource():
    a = _analyzed("function f( {")
    assert not a.parse_ok
    assert a.units == []
    assert a.parse_error


def test_named_function_expression_not_anonymous():
    a = _analyzed("var g = function inner() {};")
    assert a.units[0].kind == "expression"
    assert a.units[0].name == "inner"
    assert not a.units[0].is_anonymous


def test_unnamed_function_expression_anonymous():
    a = _analyzed("var g = function () {};")
    assert a.units[0].is_anonymous


def test_all_seven_kinds_recognized():
    src = (
        "function d(){}\n"
        "var e = function(){};\n"
        "var a = () => 1;\n"
        "class C { constructor(){} m(){} get g(){return 1} set s(v){} }\n"
    )
    a = _analyzed(src)
    assert {u.kind for u in a.units} == FUNCTION_KINDS


def test_byte_spans_for_multibyte_source():
    src = 'const п = "я";\nfunction f() { return "ю"; }\n'
    a = _analyzed(src)
    data = src.encode("utf-8")
    assert a.source_len == len(data)
    u = a.units[0]
    assert data[u.span.start:u.span.end].decode() == 'function f() { return "ю"; }'
    assert data[u.body_span.start:u.body_span.end].decode() == '{ return "ю"; }'


def test_body_contained_in_span():
    src = "class C { async *m(a=()=>1){ return () => 2; } }"
    a = _analyzed(src)
    for u in a.units:
        assert u.span.contains(u.body_span)


def test_units_sorted_and_ids_distinct():
    src = "function a(){function b(){}} var c = () => () => 1;"
    a = _analyzed(src)
    starts = [u.span.start for u in a.units]
    assert starts == sorted(starts)
    ids = [u.id for u in a.units]
    assert len(set(ids)) == len(ids)


def test_analyze_is_pure():
    src = "function a(){return () => 1}"
    key = ResourceKey.for_body("https://x/a.js", src.encode())
    assert analyze(src, key) == analyze(src, key)


def test_function_id_deterministic_and_distinct():
    assert function_id(KEY, 0, "declaration") == function_id(KEY, 0, "declaration")
    assert function_id(KEY, 0, "declaration") != function_id(KEY, 40, "declaration")
    other = ResourceKey.for_body("https://example.com/app.js", b"function f(){return 2}")
    assert function_id(KEY, 0, "declaration") != function_id(other, 0, "declaration")


def test_function_id_shape():
    fid = function_id(KEY, 17, "arrow")
    assert len(fid) <= 16
    assert all(c in "0123456789abcdef" for c in fid)


def test_canonical_url_drops_fragment_and_lowercases():
    assert canonical_url("HTTPS://Example.COM/A.js#frag") == "https://example.com/A.js"
    assert canonical_url("http://a.com/x?q=1#z") == "http://a.com/x?q=1"


def test_source_span_invariants():
    with pytest.raises(ValueError):
        SourceSpan(5, 5)
    with pytest.raises(ValueError):
        SourceSpan(-1, 3)


def test_depth_counts_enclosing_functions():
    src = "function a(){ const b = () => { function c(){} }; }"
    a = _analyzed(src)
    depths = {u.name or u.kind: u.depth for u in a.units}
    assert depths == {"a": 0, "arrow": 1, "c": 2}


def test_long_ternary_chain_parses():
    # minified translation tables chain hundreds of conditionals
    chain = "var pick = " + "".join(f"c{i} ? f{i}() : " for i in range(400)) + "fallback();"
    a = _analyzed(chain)
    assert a.parse_ok, a.parse_error


def test_pathological_nesting_fails_open():
    a = _analyzed("var x = " + "(" * 40000 + "1" + ")" * 40000 + ";")
    assert not a.parse_ok
    assert a.units == []
