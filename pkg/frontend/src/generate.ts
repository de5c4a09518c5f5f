/**
 * Seeded generator of small deterministic JS programs for differential
 * testing: every program writes its observable behavior through `out(...)`
 * and uses no ambient nondeterminism, so variants can be compared exactly.
 */

export type Rng = () => number;

export function mulberry32(seed: number): Rng {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function pick<T>(rng: Rng, items: T[]): T {
  return items[Math.floor(rng() * items.length)];
}

function int(rng: Rng, lo: number, hi: number): number {
  return lo + Math.floor(rng() * (hi - lo + 1));
}

interface Ctx {
  rng: Rng;
  fns: string[];      // callable zero-or-two-arg function names defined so far
  globals: string[];
  depth: number;
}

function expr(ctx: Ctx): string {
  const { rng } = ctx;
  const atoms: Array<() => string> = [
    () => String(int(rng, 0, 9)),
    () => `"s${int(rng, 0, 9)}"`,
    () => pick(rng, ctx.globals),
  ];
  if (ctx.fns.length > 0 && ctx.depth < 3) {
    atoms.push(() => {
      const fn = pick(rng, ctx.fns);
      return `${fn}(${int(rng, 0, 9)}, ${int(rng, 0, 9)})`;
    });
  }
  const a = pick(rng, atoms)();
  if (rng() < 0.4) return a;
  const b = pick(rng, atoms)();
  const op = pick(rng, ["+", "-", "*", "+", "+"]);
  if (rng() < 0.2) {
    const c = pick(rng, atoms)();
    return `(${a} ${op} ${b} ? ${c} : ${a})`;
  }
  return `(${a} ${op} ${b})`;
}

function bodyStatements(ctx: Ctx, params: string[]): string[] {
  const { rng } = ctx;
  const scoped: Ctx = { ...ctx, globals: [...ctx.globals, ...params], depth: ctx.depth + 1 };
  const out: string[] = [];
  const n = int(rng, 1, 3);
  for (let i = 0; i < n; i++) {
    switch (int(rng, 0, 4)) {
      case 0:
        out.push(`out(${expr(scoped)});`);
        break;
      case 1: {
        const g = pick(rng, ctx.globals);
        out.push(`${g} = ${g} + ${expr(scoped)};`);
        break;
      }
      case 2:
        out.push(`var t${i} = ${expr(scoped)}; out("t:" + t${i});`);
        break;
      case 3:
        out.push(`if (${expr(scoped)} % 2) { out("odd${i}"); } else { out("even${i}"); }`);
        break;
      default:
        out.push(`for (var i${i} = 0; i${i} < ${int(rng, 1, 3)}; i${i}++) { out("L" + i${i}); }`);
    }
  }
  out.push(`return ${expr(scoped)};`);
  return out;
}

function defineFunction(ctx: Ctx, index: number): string {
  const { rng } = ctx;
  const name = `f${index}`;
  const params = ["a", "b"];
  const body = bodyStatements(ctx, params).join(" ");
  const kind = int(rng, 0, 6);
  let text: string;
  switch (kind) {
    case 0:
      text = `function ${name}(a, b) { ${body} }`;
      break;
    case 1:
      text = `var ${name} = function (a, b) { ${body} };`;
      break;
    case 2:
      text = `var ${name} = function inner${index}(a, b) { ${body} };`;
      break;
    case 3:
      text = `var ${name} = (a, b) => { ${body} };`;
      break;
    case 4:
      text = `var ${name} = (a, b) => ${expr({ ...ctx, globals: [...ctx.globals, "a", "b"], depth: ctx.depth + 1 })};`;
      break;
    case 5: {
      text = [
        `var o${index} = {`,
        `  run(a, b) { ${body} },`,
        `  get snapshot() { return ${expr(ctx)}; },`,
        `};`,
        `var ${name} = function (a, b) { return o${index}.run(a, b) + ("" + o${index}.snapshot); };`,
      ].join("\n");
      break;
    }
    default: {
      text = [
        `class C${index} {`,
        `  constructor(a, b) { this.v = (a || 0) + (b || 0); }`,
        `  run(a, b) { ${body.replace(/return /, "return this.v + ")} }`,
        `}`,
        `var ${name} = function (a, b) { return new C${index}(a, b).run(a, b); };`,
      ].join("\n");
      break;
    }
  }
  ctx.fns.push(name);
  return text;
}

export function generateProgram(seed: number): string {
  const rng = mulberry32(seed);
  const nGlobals = int(rng, 1, 3);
  const globals = Array.from({ length: nGlobals }, (_, i) => `g${i}`);
  const parts: string[] = globals.map((g, i) => `var ${g} = ${i + 1};`);
  const ctx: Ctx = { rng, fns: [], globals, depth: 0 };
  const nFns = int(rng, 2, 5);
  for (let i = 0; i < nFns; i++) {
    parts.push(defineFunction(ctx, i));
  }
  // a closure-using helper plus a bounded recursive function, always
  parts.push(
    `function rec${seed % 7}(n) { return n <= 0 ? 0 : n + rec${seed % 7}(n - 1); }`,
    `out("rec:" + rec${seed % 7}(${int(rng, 2, 6)}));`,
  );
  const nCalls = int(rng, 2, 5);
  for (let i = 0; i < nCalls; i++) {
    const fn = pick(rng, ctx.fns);
    parts.push(`out("call${i}:" + ${fn}(${int(rng, 0, 5)}, ${int(rng, 0, 5)}));`);
  }
  parts.push(`out("globals:" + [${globals.join(", ")}].join(","));`);
  return parts.join("\n") + "\n";
}
