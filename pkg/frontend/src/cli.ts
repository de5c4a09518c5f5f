/**
 * Drive the proxy toolchain through its command-line interface.
 *
 * The harness never imports the Python package; variants are produced by the
 * installed `jselide` executable exactly as an operator would produce them.
 */
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface UnitInfo {
  id: string;
  kind: string;
  name: string | null;
  span: [number, number];
  body_span: [number, number];
  is_anonymous: boolean;
  is_async: boolean;
  is_generator: boolean;
  depth: number;
}

export interface AnalysisInfo {
  url: string;
  content_hash: string;
  parse_ok: boolean;
  source_len: number;
  units: UnitInfo[];
}

export interface ElisionArtifacts {
  body: string;
  contentHash: string;
  /** sidecar URL -> wrapped body text, keyed the way stubs fetch them */
  sidecars: Map<string, string>;
}

function run(args: string[]): string {
  return execFileSync("jselide", args, { encoding: "utf8" });
}

function scratchFile(source: string): { dir: string; file: string } {
  const dir = mkdtempSync(join(tmpdir(), "jselide-harness-"));
  const file = join(dir, "input.js");
  writeFileSync(file, source);
  return { dir, file };
}

export function analyzeSource(source: string): AnalysisInfo {
  const { file } = scratchFile(source);
  return JSON.parse(run(["analyze", file])) as AnalysisInfo;
}

export function instrumentSource(source: string): { body: string; contentHash: string } {
  const { dir, file } = scratchFile(source);
  const out = join(dir, "instrumented.js");
  run(["instrument", file, "--out", out]);
  const body = readFileSync(out, "utf8");
  // the prologue embeds the resource key; avoids a second CLI round-trip
  const m = body.match(/"hash": "([0-9a-f]{64})"/);
  const contentHash = m ? m[1] : analyzeSource(source).content_hash;
  return { body, contentHash };
}

export function elideSource(source: string, executedIds: string[]): ElisionArtifacts {
  const { dir, file } = scratchFile(source);
  const cov = join(dir, "coverage.json");
  writeFileSync(cov, JSON.stringify(executedIds));
  const out = join(dir, "elided.js");
  const sidecarDir = join(dir, "sidecars");
  run([
    "elide", file, "--coverage", cov, "--out", out,
    "--sidecar-dir", sidecarDir, "--permissive",
  ]);
  const body = readFileSync(out, "utf8");
  const stubUrl = body.match(/\/__jscov__\/body\/([0-9a-f]{64})\//);
  const hash = stubUrl ? stubUrl[1] : analyzeSource(source).content_hash;
  const sidecars = new Map<string, string>();
  if (existsSync(sidecarDir)) {
    for (const fid of readdirSync(sidecarDir)) {
      sidecars.set(
        `/__jscov__/body/${hash}/${fid}`,
        readFileSync(join(sidecarDir, fid), "utf8"),
      );
    }
  }
  return { body, contentHash: hash, sidecars };
}
