"""Corpus checks against frozen reference-parser labels."""

from jselide.analyzer import ResourceKey, analyze


def _analysis(name: str, body: bytes):
    src = body.decode("utf-8")
    key = ResourceKey.for_body("corpus://" + name, body)
    return src, analyze(src, key)


def test_every_span_matches_labels(corpus_labels, corpus_files):
    for name, expected in corpus_labels.items():
        src, a = _analysis(name, corpus_files[name])
        assert a.parse_ok, f"{name}: {a.parse_error}"
        assert a.source_len == expected["source_len"], name
        assert len(a.units) == len(expected["units"]), name
        for got, want in zip(a.units, expected["units"]):
            where = f"{name} @ {want['span']}"
            assert got.kind == want["kind"], where
            assert got.name == want["name"], where
            assert [got.span.start, got.span.end] == want["span"], where
            assert [got.body_span.start, got.body_span.end] == want["body_span"], where
            assert got.is_anonymous == want["is_anonymous"], where
            assert got.is_async == want["is_async"], where
            assert got.is_generator == want["is_generator"], where
            assert got.depth == want["depth"], where


def test_kind_coverage_and_nesting(corpus_labels):
    kinds = set()
    max_depth = 0
    expr_arrow_examples = 0
    for doc in corpus_labels.values():
        for u in doc["units"]:
            kinds.add(u["kind"])
            max_depth = max(max_depth, u["depth"])
            if u["kind"] == "arrow" and u["body_span"][1] - u["body_span"][0] > 0:
                expr_arrow_examples += 1
    assert kinds == {
        "declaration", "expression", "arrow", "method", "getter", "setter", "constructor",
    }
    assert max_depth >= 3
    assert len(corpus_labels) >= 30


def test_unit_slices_reparse_as_stated_kind(corpus_files):
    for name, body in corpus_files.items():
        src, a = _analysis(name, body)
        data = src.encode("utf-8")
        for u in a.units:
            text = data[u.span.start:u.span.end].decode("utf-8")
            if u.kind == "declaration":
                wrapped, expect = text, "declaration"
            elif u.kind in ("expression", "arrow"):
                wrapped, expect = f"({text})", u.kind
            else:
                wrapped, expect = f"(class {{ {text} }})", u.kind
            key = ResourceKey.for_body("slice://x", wrapped.encode())
            sliced = analyze(wrapped, key)
            assert sliced.parse_ok, f"{name}: slice of {u.kind} does not reparse: {text[:60]}"
            kinds = {su.kind for su in sliced.units}
            if expect == "method":
                # an object method named "constructor" is a class constructor
                # once re-wrapped in class syntax
                assert kinds & {"method", "constructor"}, f"{name}: {text[:60]}"
            else:
                assert expect in kinds, f"{name}: {text[:60]} -> {kinds}"


def test_top_level_body_bytes_bounded(corpus_files):
    for name, body in corpus_files.items():
        src, a = _analysis(name, body)
        total = sum(len(u.body_span) for u in a.units if u.depth == 0)
        assert total <= a.source_len, name


def test_anonymity_counts_match_labels(corpus_labels, corpus_files):
    for name, expected in corpus_labels.items():
        src, a = _analysis(name, corpus_files[name])
        want = sum(1 for u in expected["units"] if u["is_anonymous"])
        got = sum(1 for u in a.units if u.is_anonymous)
        assert got == want, name


def test_nested_spans_disjoint_or_contained(corpus_files):
    for name, body in corpus_files.items():
        src, a = _analysis(name, body)
        for i, u in enumerate(a.units):
            for v in a.units[i + 1:]:
                if v.span.start >= u.span.end:
                    continue  # disjoint
                assert u.span.contains(v.span), (
                    f"{name}: partially overlapping spans {u.span} vs {v.span}"
                )
