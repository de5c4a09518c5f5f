/**
 * Template validity: everything the rewriter injects must be syntactically
 * valid JS in both sloppy and strict mode, checked by the engine itself.
 */
import vm from "node:vm";
import { describe, expect, it } from "vitest";

import { elideSource, instrumentSource } from "../src/cli.js";

function engineParses(code: string): boolean {
  try {
    new vm.Script(code);
    return true;
  } catch {
    return false;
  }
}

const SOURCE = [
  "function decl(a){return a}",
  "var expr = function(){return 1};",
  "var arrow = (x) => x + 1;",
  "class K { constructor(){this.v=0} m(){return this.v} get g(){return 1} }",
  "function* gen(){ yield 1 }",
  "async function af(){ return 2 }",
].join("\n");

describe("injected text is engine-valid", () => {
  it("instrumented output parses in sloppy and strict mode", () => {
    const inst = instrumentSource(SOURCE);
    expect(engineParses(inst.body)).toBe(true);
    expect(engineParses('"use strict";\n' + inst.body)).toBe(true);
  });

  it("prologue alone parses in both modes", () => {
    const inst = instrumentSource("var x = 1;\n");
    const prologue = inst.body.slice(0, inst.body.indexOf("\n") + 1);
    expect(prologue).toContain("jscov");
    expect(engineParses(prologue)).toBe(true);
    expect(engineParses('"use strict";\n' + prologue)).toBe(true);
  });

  it("elided output parses in both modes", () => {
    const art = elideSource(SOURCE, []);
    expect(engineParses(art.body)).toBe(true);
    expect(engineParses('"use strict";\n' + art.body)).toBe(true);
  });

  it("every sidecar is a directly evaluable expression statement", () => {
    const art = elideSource(SOURCE, []);
    expect(art.sidecars.size).toBeGreaterThan(0);
    for (const [url, text] of art.sidecars) {
      expect(engineParses(text), url).toBe(true);
      expect(engineParses('"use strict";' + text), url).toBe(true);
      // a single evaluation step both defines and invokes the wrapper
      expect(text.endsWith(".apply(this,arguments);") || text.endsWith(")();"), url).toBe(true);
    }
  });
});
