"""Measurement tables: superfluous-code statistics from the store and cache.

Emits per-resource rows (function counts, anonymous fractions, byte shares,
late-discovered id counts) plus page-level byte-weighted aggregates, as CSV
with a fixed column order, and a companion CSV of sorted values ready for
CDF plotting.

Byte percentages use decoded (uncompressed) bytes as the base; compressed
sizes are emitted as extra columns computed by recompressing, since
published payload figures mix both bases.
"""

from __future__ import annotations

import csv
import gzip
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlsplit

from .analyzer import ResourceAnalysis, analyze
from .cache import ResourceCache
from .party import Party, PublicSuffixList, classify_party
from .store import CoverageRecord, CoverageStore

__all__ = [
    "KeyMismatch",
    "ResourceStats",
    "PartyAggregate",
    "PageReport",
    "NewIdReport",
    "resource_stats",
    "page_report",
    "new_id_rate",
    "write_page_csv",
    "RESOURCE_CSV_COLUMNS",
    "CDF_CSV_COLUMNS",
]


class KeyMismatch(ValueError):
    pass


RESOURCE_CSV_COLUMNS = [
    "page_url", "url", "content_hash", "party",
    "total_functions", "executed_functions", "superfluous_functions", "superfluous_pct",
    "total_anonymous", "anonymous_pct",
    "total_bytes", "superfluous_bytes", "superfluous_bytes_pct",
    "new_ids_after_first_beacon",
    "compressed_bytes", "elided_compressed_bytes",
]

CDF_CSV_COLUMNS = ["metric", "value", "cum_fraction"]


@dataclass
class ResourceStats:
    key_url: str
    key_hash: str
    party: Party
    total_functions: int = 0
    executed_functions: int = 0
    superfluous_functions: int = 0
    superfluous_pct: float = 0.0
    total_anonymous: int = 0
    anonymous_pct: float = 0.0
    total_bytes: int = 0
    superfluous_bytes: int = 0
    superfluous_bytes_pct: float = 0.0
    new_ids_after_first_beacon: int = 0
    compressed_bytes: int | None = None
    elided_compressed_bytes: int | None = None


@dataclass
class PartyAggregate:
    resources: int = 0
    total_functions: int = 0
    executed_functions: int = 0
    superfluous_functions: int = 0
    total_bytes: int = 0
    superfluous_bytes: int = 0

    @property
    def superfluous_bytes_pct(self) -> float:
        if self.total_bytes == 0:
            return 0.0
        return 100.0 * self.superfluous_bytes / self.total_bytes


@dataclass
class PageReport:
    page_url: str
    resources: list[ResourceStats] = field(default_factory=list)
    per_party: dict[str, PartyAggregate] = field(default_factory=dict)
    page_superfluous_pct: float = 0.0


@dataclass
class NewIdReport:
    """Late-discovery rates: ids first seen after the first beacon."""

    per_resource: dict[tuple[str, str], float] = field(default_factory=dict)
    share_with_late_ids: float = 0.0


def _superfluous_bytes(analysis: ResourceAnalysis, executed: set[str]) -> int:
    """Body bytes of never-executed units, counting only outermost spans."""
    total = 0
    covered_end = -1
    for u in analysis.units:  # ascending span.start
        if u.id in executed:
            continue
        if u.span.start < covered_end:  # nested in a counted ancestor
            continue
        total += len(u.body_span)
        covered_end = max(covered_end, u.body_span.end)
    return total


def resource_stats(
    analysis: ResourceAnalysis,
    record: CoverageRecord,
    party: Party,
) -> ResourceStats:
    if record.key != analysis.key:
        raise KeyMismatch(f"record key {record.key} differs from analysis key {analysis.key}")
    unit_ids = analysis.unit_ids()
    executed = set(record.executed) & unit_ids
    total = len(analysis.units)
    superfluous = total - len(executed)
    anon = sum(1 for u in analysis.units if u.is_anonymous)
    sup_bytes = _superfluous_bytes(analysis, executed)
    late = sum(
        1 for fid, ordinal in record.first_seen_beacon.items()
        if ordinal >= 2 and fid in unit_ids
    )
    return ResourceStats(
        key_url=analysis.key.url,
        key_hash=analysis.key.content_hash,
        party=party,
        total_functions=total,
        executed_functions=len(executed),
        superfluous_functions=superfluous,
        superfluous_pct=(100.0 * superfluous / total) if total else 0.0,
        total_anonymous=anon,
        anonymous_pct=(100.0 * anon / total) if total else 0.0,
        total_bytes=analysis.source_len,
        superfluous_bytes=sup_bytes,
        superfluous_bytes_pct=(100.0 * sup_bytes / analysis.source_len) if analysis.source_len else 0.0,
        new_ids_after_first_beacon=late,
    )


def _host_of(url: str) -> str | None:
    try:
        return urlsplit(url).hostname
    except ValueError:
        return None


def page_report(
    store: CoverageStore,
    cache: ResourceCache,
    page_url: str,
    first_party_overrides: tuple[str, ...] = (),
    psl: PublicSuffixList | None = None,
) -> PageReport:
    """Aggregate stats for every resource beaconed from `page_url`.

    Resource-to-page membership comes from the beacons' page field. Returns
    an empty report when nothing matched (the CLI exit code distinguishes).
    """
    report = PageReport(page_url=page_url)
    page_host = _host_of(page_url)
    for record in store.records():
        if page_url not in record.pages:
            continue
        res = cache.by_hash(record.key.url, record.key.content_hash)
        if res is None or res.opaque:
            continue
        try:
            text = res.decoded_body.decode(res.charset)
        except (UnicodeDecodeError, LookupError):
            continue
        analysis = analyze(text, record.key, res.charset)
        if not analysis.parse_ok:
            continue
        r_host = _host_of(record.key.url)
        if page_host and r_host:
            party = classify_party(r_host, page_host, list(first_party_overrides), psl)
        else:
            party = Party.THIRD
        stats = resource_stats(analysis, record, party)
        stats.compressed_bytes = len(gzip.compress(res.decoded_body, mtime=0))
        elided = cache.variant(record.key.content_hash, "elided")
        if elided is not None:
            stats.elided_compressed_bytes = len(gzip.compress(elided, mtime=0))
        report.resources.append(stats)

    for stats in report.resources:
        agg = report.per_party.setdefault(stats.party.value, PartyAggregate())
        agg.resources += 1
        agg.total_functions += stats.total_functions
        agg.executed_functions += stats.executed_functions
        agg.superfluous_functions += stats.superfluous_functions
        agg.total_bytes += stats.total_bytes
        agg.superfluous_bytes += stats.superfluous_bytes

    total_bytes = sum(s.total_bytes for s in report.resources)
    sup_bytes = sum(s.superfluous_bytes for s in report.resources)
    report.page_superfluous_pct = (100.0 * sup_bytes / total_bytes) if total_bytes else 0.0
    return report


def new_id_rate(store: CoverageStore) -> NewIdReport:
    """Per-resource fraction of executed ids first seen after beacon one."""
    out = NewIdReport()
    late_resources = 0
    records = store.records()
    for rec in records:
        if rec.executed:
            late = sum(1 for ordinal in rec.first_seen_beacon.values() if ordinal >= 2)
            fraction = late / len(rec.executed)
        else:
            fraction = 0.0
        out.per_resource[(rec.key.url, rec.key.content_hash)] = fraction
        if fraction > 0:
            late_resources += 1
    out.share_with_late_ids = (late_resources / len(records)) if records else 0.0
    return out


def write_page_csv(report: PageReport, out_path: str | Path) -> Path:
    """Write the per-resource table plus a page summary row; returns the
    companion CDF file path."""
    out_path = Path(out_path)
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESOURCE_CSV_COLUMNS)
        for s in report.resources:
            w.writerow([
                report.page_url, s.key_url, s.key_hash, s.party.value,
                s.total_functions, s.executed_functions, s.superfluous_functions,
                s.superfluous_pct,
                s.total_anonymous, s.anonymous_pct,
                s.total_bytes, s.superfluous_bytes, s.superfluous_bytes_pct,
                s.new_ids_after_first_beacon,
                "" if s.compressed_bytes is None else s.compressed_bytes,
                "" if s.elided_compressed_bytes is None else s.elided_compressed_bytes,
            ])
        total_fn = sum(s.total_functions for s in report.resources)
        exec_fn = sum(s.executed_functions for s in report.resources)
        anon_fn = sum(s.total_anonymous for s in report.resources)
        total_b = sum(s.total_bytes for s in report.resources)
        sup_b = sum(s.superfluous_bytes for s in report.resources)
        w.writerow([
            report.page_url, "(page)", "", "page",
            total_fn, exec_fn, total_fn - exec_fn,
            (100.0 * (total_fn - exec_fn) / total_fn) if total_fn else 0.0,
            anon_fn, (100.0 * anon_fn / total_fn) if total_fn else 0.0,
            total_b, sup_b, report.page_superfluous_pct,
            sum(s.new_ids_after_first_beacon for s in report.resources),
            "", "",
        ])

    cdf_path = out_path.with_name(out_path.stem + ".cdf" + out_path.suffix)
    with open(cdf_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CDF_CSV_COLUMNS)
        for metric, getter in (
            ("superfluous_pct", lambda s: s.superfluous_pct),
            ("superfluous_bytes_pct", lambda s: s.superfluous_bytes_pct),
        ):
            values = sorted(getter(s) for s in report.resources)
            n = len(values)
            for i, v in enumerate(values, start=1):
                w.writerow([metric, v, i / n])
    return cdf_path
