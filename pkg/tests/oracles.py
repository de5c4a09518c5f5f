"""Independent brute-force oracles used by the test suites.

These deliberately re-derive elision selection and stats with plain O(n^2)
containment logic so the implementation's single-pass bookkeeping is checked
against a second route.
"""

from jselide.runtime import default_templates, render_stub
from jselide.transform import ElisionStats


def oracle_elide(analysis, executed, policy, base):
    """Expected (stubbed units, stats) for one elision pass."""
    templates = default_templates()
    units = analysis.units
    executed = set(executed) & {u.id for u in units}

    def eligible(u):
        if u.kind in policy.skip_kinds:
            return False
        if u.is_async and policy.skip_async:
            return False
        if u.is_generator and policy.skip_generators:
            return False
        if u.scope_escape:
            return False
        return True

    stubbed = []
    for u in units:
        if u.id in executed or not eligible(u):
            continue
        inside = any(
            s.body_span.start <= u.span.start and u.span.end <= s.body_span.end
            for s in stubbed
        )
        if inside:
            continue
        stub = render_stub(templates, f"{base}/{u.id}", generator=u.is_generator)
        if not policy.allow_growth and len(u.body_span) <= len(stub.encode()) + policy.min_body_bytes:
            continue
        stubbed.append(u)

    counted = []
    skipped = []
    for u in units:
        if u.id in executed:
            continue
        inside_stub = any(
            s.body_span.start <= u.span.start and u.span.end <= s.body_span.end
            for s in stubbed if s is not u
        )
        if u in stubbed:
            counted.append(u)
        elif inside_stub:
            if eligible(u):
                counted.append(u)
        else:
            skipped.append(u)

    stats = ElisionStats(
        total_functions=len(units),
        elided_functions=len(counted),
        skipped_functions=len(skipped),
        total_anonymous=sum(1 for u in units if u.is_anonymous),
        elided_anonymous=sum(1 for u in counted if u.is_anonymous),
        total_bytes=analysis.source_len,
        elided_bytes=sum(len(u.body_span) for u in stubbed),
    )
    return stubbed, stats


def oracle_body(source_bytes, analysis, stubbed, base):
    """Expected output bytes built by an independent splice."""
    templates = default_templates()
    out = []
    pos = 0
    for u in sorted(stubbed, key=lambda u: u.body_span.start):
        stub = render_stub(templates, f"{base}/{u.id}", generator=u.is_generator)
        out.append(source_bytes[pos:u.body_span.start])
        out.append(stub.encode())
        pos = u.body_span.end
    out.append(source_bytes[pos:])
    return b"".join(out)
