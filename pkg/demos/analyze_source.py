"""Walk through the function-unit inventory of a small script."""

from jselide import ResourceKey, analyze

SOURCE = """\
function boot() { render(); }
var render = () => { document.title = "ready"; };
class Menu {
  constructor() { this.items = []; }
  get size() { return this.items.length; }
  add(item) { this.items.push(item); }
}
"""


def main():
    key = ResourceKey.for_body("https://demo.example/app.js", SOURCE.encode())
    analysis = analyze(SOURCE, key)
    print(f"resource: {analysis.key.url}")
    print(f"decoded bytes: {analysis.source_len}, parse_ok: {analysis.parse_ok}\n")
    for u in analysis.units:
        body = SOURCE.encode()[u.body_span.start:u.body_span.end].decode()
        flags = "".join(f" [{f}]" for f, on in (
            ("anon", u.is_anonymous), ("async", u.is_async), ("gen", u.is_generator),
        ) if on)
        print(f"{u.id}  {u.kind:<12} {u.name or '':<12} depth={u.depth} "
              f"span={u.span.start}..{u.span.end}{flags}")
        print(f"{'':18}body: {body if len(body) < 48 else body[:45] + '...'}")


if __name__ == "__main__":
    main()
