"""The full lifecycle in-process: instrument, beacon, phase flip, elide."""

from jselide import (
    CoverageBeacon, CoverageStore, ElisionPolicy, PhasePolicy, ResourceKey,
    ResourcePhase, analyze, elide, instrument,
)

SOURCE = """\
function hot() { return "always runs"; }
function cold() { var a = 0; for (var i = 0; i < 64; i++) { a += heavyMath(i); } return a; }
hot();
"""


def main():
    key = ResourceKey.for_body("https://demo.example/page.js", SOURCE.encode())
    analysis = analyze(SOURCE, key)

    learning = instrument(SOURCE, analysis)
    print("--- instrumented (served while learning) ---")
    print(learning.body)

    store = CoverageStore()
    hot_id = next(u.id for u in analysis.units if u.name == "hot")
    policy = PhasePolicy(min_beacons=5)
    for load in range(5):
        store.record_beacon(CoverageBeacon(
            version=1, key=key, ids=(hot_id,), page_url="https://demo.example/",
            received_at=float(load),
        ))
        print(f"load {load + 1}: phase={store.phase(key, policy).value}")

    result = elide(SOURCE, analysis, store.executed_ids(key),
                   ElisionPolicy.permissive())
    print("\n--- elided (served after learning) ---")
    print(result.body)
    print("--- sidecars ---")
    for fid, text in result.sidecars.items():
        print(f"{fid}: {text}")
    s = result.stats
    print(f"\n{s.elided_functions}/{s.total_functions} functions elided, "
          f"{s.elided_bytes}/{s.total_bytes} bytes moved to sidecars")


if __name__ == "__main__":
    main()
