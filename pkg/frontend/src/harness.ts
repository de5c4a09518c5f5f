/**
 * Execute one JS resource variant inside a fresh V8 context and capture its
 * observable behavior: everything the program reports through `out(...)`,
 * any uncaught error, plus the beacons and sidecar fetches the runtime made.
 */
import vm from "node:vm";
import { BeaconHit, FetchHit, ShimOptions, ShimWorld, makeWorld } from "./shims.js";

export interface RunResult {
  outputs: unknown[];
  error: string | null;
  beacons: BeaconHit[];
  fetches: FetchHit[];
  world: ShimWorld;
}

export interface RunOptions extends ShimOptions {
  /** dispatch window load and flush timers after evaluation (default true) */
  settle?: boolean;
}

export function runVariant(code: string, opts: RunOptions = {}): RunResult {
  const world = makeWorld(opts);
  const outputs: unknown[] = [];
  world.sandbox.out = (...values: unknown[]) => {
    outputs.push(values.length === 1 ? values[0] : values);
  };
  const context = vm.createContext(world.sandbox);
  let error: string | null = null;
  try {
    vm.runInContext(code, context, { filename: "variant.js", timeout: 5000 });
  } catch (e) {
    error = e instanceof Error ? `${e.name}: ${e.message}` : String(e);
  }
  if (opts.settle !== false) {
    world.dispatchLoad();
    world.flushTimers();
  }
  return { outputs, error, beacons: world.beacons, fetches: world.fetches, world };
}

export function observable(r: RunResult): string {
  return JSON.stringify({ outputs: r.outputs, error: r.error });
}
