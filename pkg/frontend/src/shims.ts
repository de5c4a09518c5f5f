/**
 * Browser-environment shims for running rewritten resources inside node:vm.
 *
 * Provides a synchronous XMLHttpRequest backed by an in-memory sidecar map
 * (GET) and a beacon sink (POST), a window with a dispatchable load event,
 * deterministic fake timers, and an optional navigator.sendBeacon.
 */

export interface BeaconHit {
  url: string;
  payload: string;
  transport: "sendBeacon" | "xhr";
}

export interface FetchHit {
  url: string;
}

export interface ShimWorld {
  sandbox: Record<string, unknown>;
  beacons: BeaconHit[];
  fetches: FetchHit[];
  dispatchLoad(): void;
  /** run queued timer callbacks in (delay, insertion) order until drained */
  flushTimers(): void;
  pendingTimerDelays(): number[];
}

export interface ShimOptions {
  sidecars?: Map<string, string>;
  beaconPath?: string;
  pageUrl?: string;
  withWindow?: boolean;
  withSendBeacon?: boolean;
}

export function makeWorld(opts: ShimOptions = {}): ShimWorld {
  const sidecars = opts.sidecars ?? new Map<string, string>();
  const beaconPath = opts.beaconPath ?? "/__jscov__/beacon";
  const beacons: BeaconHit[] = [];
  const fetches: FetchHit[] = [];

  type Timer = { fn: () => void; delay: number; seq: number };
  let timers: Timer[] = [];
  let seq = 0;

  class FakeXHR {
    method = "GET";
    url = "";
    status = 0;
    responseText = "";
    open(method: string, url: string, _async?: boolean) {
      this.method = method.toUpperCase();
      this.url = url;
    }
    setRequestHeader(_k: string, _v: string) {}
    send(body?: string | null) {
      if (this.method === "POST" && this.url === beaconPath) {
        beacons.push({ url: this.url, payload: String(body ?? ""), transport: "xhr" });
        this.status = 204;
        return;
      }
      fetches.push({ url: this.url });
      const hit = sidecars.get(this.url);
      if (hit === undefined) {
        this.status = 404;
        this.responseText = "";
      } else {
        this.status = 200;
        this.responseText = hit;
      }
    }
  }

  const loadListeners: Array<() => void> = [];
  const sandbox: Record<string, unknown> = {
    XMLHttpRequest: FakeXHR,
    setTimeout: (fn: () => void, delay?: number) => {
      timers.push({ fn, delay: delay ?? 0, seq: seq++ });
      return seq;
    },
    clearTimeout: () => {},
    location: { href: opts.pageUrl ?? "https://page.example/" },
  };

  if (opts.withWindow !== false) {
    const windowObj: Record<string, unknown> = {
      addEventListener: (ev: string, fn: () => void) => {
        if (ev === "load") loadListeners.push(fn);
      },
    };
    sandbox.window = windowObj;
    sandbox.document = { readyState: "loading" };
  }
  if (opts.withSendBeacon !== false) {
    sandbox.navigator = {
      sendBeacon: (url: string, payload: string) => {
        beacons.push({ url, payload: String(payload), transport: "sendBeacon" });
        return true;
      },
    };
  }

  return {
    sandbox,
    beacons,
    fetches,
    dispatchLoad() {
      for (const fn of loadListeners.splice(0)) fn();
    },
    flushTimers() {
      let guard = 0;
      while (timers.length > 0 && guard++ < 10_000) {
        timers.sort((a, b) => a.delay - b.delay || a.seq - b.seq);
        const next = timers.shift()!;
        next.fn();
      }
    },
    pendingTimerDelays() {
      return timers.map((t) => t.delay).sort((a, b) => a - b);
    },
  };
}
