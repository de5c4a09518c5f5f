/**
 * Synchronous fallback stubs: direct-eval scope access, receiver/argument
 * forwarding, per-URL memoization, order preservation, failure behavior.
 */
import { describe, expect, it } from "vitest";

import { analyzeSource, elideSource } from "../src/cli.js";
import { runVariant } from "../src/harness.js";

function elideAll(source: string) {
  return elideSource(source, []);
}

describe("fallback stubs", () => {
  it("restores parameters and closures through direct eval", () => {
    const src = [
      "function add(a,b){return a+b}",
      "var base = 40;",
      "function closureAdd(x){return base + x}",
      "out(add(2,3));",
      "out(closureAdd(2));",
    ].join("\n");
    const art = elideAll(src);
    expect(art.sidecars.size).toBe(2);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.error).toBeNull();
    expect(r.outputs).toEqual([5, 42]);
  });

  it("writes to closed-over variables land in the original scope", () => {
    const src = [
      "var count = 0;",
      "function inc(){count++}",
      "inc(); inc(); inc();",
      "out(count);",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual([3]);
  });

  it("forwards this and the arguments object", () => {
    const src = [
      "var obj = { x: 5, read: function(){ return this.x + arguments.length } };",
      "out(obj.read(1,2,3));",
      "out(obj.read.call({x: 50}));",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual([8, 50]);
  });

  it("memoizes each sidecar for the page lifetime", () => {
    const src = "function f(){return 1}\nout(f());\nout(f());\nout(f());\n";
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual([1, 1, 1]);
    expect(r.fetches.length).toBe(1);
  });

  it("multiple stub calls preserve program order", () => {
    const src = [
      "var order = [];",
      "function a(){ order.push('a') }",
      "function b(){ order.push('b:' + order.length) }",
      "a(); b(); a();",
      "out(order.join('|'));",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual(["a|b:1|a"]);
    // both bodies fetched, each exactly once, in first-call order
    expect(r.fetches.length).toBe(2);
  });

  it("throws a descriptive error when the sidecar fetch fails", () => {
    const src = "function gone(){return 1}\nout(gone());\n";
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: new Map() });
    expect(r.error).toMatch(/failed to load elided body/);
    expect(r.error).toMatch(/404/);
  });

  it("recursive elided functions re-enter through the stub", () => {
    const src = "function fact(n){return n<=1?1:n*fact(n-1)}\nout(fact(6));\n";
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual([720]);
    expect(r.fetches.length).toBe(1);
  });

  it("method bodies reading super are left intact", () => {
    const src = [
      "class Base { label(){ return 'base' } }",
      "class Kid extends Base { label(){ return super.label() + '/kid' } }",
      "out(new Kid().label());",
    ].join("\n");
    const analysis = analyzeSource(src);
    const art = elideAll(src);
    // the super-using body must still be present verbatim
    expect(art.body).toContain("super.label() + '/kid'");
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual(["base/kid"]);
    expect(analysis.units.length).toBe(2);
  });

  it("arrows inside methods keep lexical this through the stub", () => {
    const src = [
      "var host = {",
      "  tag: 't',",
      "  run: function(){ var f = () => this.tag + '!'; return f(); }",
      "};",
      "out(host.run());",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.outputs).toEqual(["t!"]);
  });

  it("elided async functions still resolve correctly", async () => {
    const src = [
      "var ready = null;",
      "async function compute(x){ return x * 2 }",
      "ready = compute(21);",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.error).toBeNull();
    const promise = r.world.sandbox.ready as Promise<number>;
    await expect(promise).resolves.toBe(42);
  });

  it("elided generators keep the full iterator protocol", () => {
    const src = [
      "function* seq(){ var got = yield 1; yield got + 1; }",
      "var it = seq();",
      "out(it.next().value);",
      "out(it.next(10).value);",
      "out(it.next().done);",
    ].join("\n");
    const art = elideAll(src);
    const r = runVariant(art.body, { sidecars: art.sidecars });
    expect(r.error).toBeNull();
    expect(r.outputs).toEqual([1, 11, true]);
  });
});
