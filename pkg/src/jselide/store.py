"""Coverage database: beacon ingestion, learning-phase state, persistence.

One record per resource variant, keyed by (canonical URL, content hash) so a
resource whose origin bytes change never inherits stale coverage. The
executed-id set only ever grows; beacon counts drive the Learning → Elided
phase transition.

Persistence is a single self-describing text file: a header line, one JSON
record per line, and a checksummed footer. Writes go to a temp file in the
same directory, are fsynced, and replace the old file atomically, so readers
never observe a torn state.
"""

from __future__ import annotations

import enum
import json
import os
import threading
import time
from dataclasses import dataclass, field
from hashlib import sha256
from pathlib import Path

from .analyzer import ResourceKey

__all__ = [
    "UnsupportedVersion",
    "MalformedBeacon",
    "CorruptState",
    "CoverageBeacon",
    "CoverageRecord",
    "PhasePolicy",
    "ResourcePhase",
    "CoverageStore",
]

BEACON_VERSION = 1
_MAGIC = "jscov-store 1"
_FOOTER_PREFIX = "#sha256="


class UnsupportedVersion(ValueError):
    pass


class MalformedBeacon(ValueError):
    pass


class CorruptState(ValueError):
    pass


@dataclass(frozen=True)
class CoverageBeacon:
    """One page load's report of executed function ids for one resource."""

    version: int
    key: ResourceKey
    ids: tuple[str, ...]
    page_url: str | None = None
    received_at: float = 0.0

    @classmethod
    def from_json(cls, payload: bytes | str, received_at: float | None = None) -> "CoverageBeacon":
        try:
            doc = json.loads(payload)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise MalformedBeacon(f"beacon is not valid JSON: {e}") from None
        if not isinstance(doc, dict):
            raise MalformedBeacon("beacon must be a JSON object")
        version = doc.get("v")
        if version != BEACON_VERSION:
            raise UnsupportedVersion(f"unsupported beacon version {version!r}")
        key = doc.get("key")
        if (
            not isinstance(key, dict)
            or not isinstance(key.get("url"), str)
            or not isinstance(key.get("hash"), str)
        ):
            raise MalformedBeacon("beacon key must carry url and hash strings")
        ids = doc.get("ids")
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise MalformedBeacon("beacon ids must be a list of strings")
        page = doc.get("page")
        if page is not None and not isinstance(page, str):
            raise MalformedBeacon("beacon page must be a string or null")
        return cls(
            version=version,
            key=ResourceKey(url=key["url"], content_hash=key["hash"]),
            ids=tuple(ids),
            page_url=page,
            received_at=time.time() if received_at is None else received_at,
        )


@dataclass
class CoverageRecord:
    """Snapshot of one resource's accumulated coverage."""

    key: ResourceKey
    executed: frozenset[str]
    beacon_count: int
    first_seen: float
    last_updated: float
    pages: frozenset[str] = frozenset()
    # ordinal (1-based) of the beacon in which each id was first reported
    first_seen_beacon: dict[str, int] = field(default_factory=dict)
    # per-beacon count of ids not seen in any earlier beacon
    new_per_beacon: tuple[int, ...] = ()


@dataclass(frozen=True)
class PhasePolicy:
    min_beacons: int = 5  # the study design: learn over five page loads
    freeze: bool = False

    def __post_init__(self):
        if self.min_beacons < 1:
            raise ValueError("min_beacons must be >= 1")


class ResourcePhase(enum.Enum):
    LEARNING = "Learning"
    ELIDED = "Elided"


class _Record:
    __slots__ = (
        "key", "executed", "beacon_count", "first_seen", "last_updated",
        "pages", "first_seen_beacon", "new_per_beacon",
    )

    def __init__(self, key: ResourceKey, now: float):
        self.key = key
        self.executed: set[str] = set()
        self.beacon_count = 0
        self.first_seen = now
        self.last_updated = now
        self.pages: set[str] = set()
        self.first_seen_beacon: dict[str, int] = {}
        self.new_per_beacon: list[int] = []

    def snapshot(self) -> CoverageRecord:
        return CoverageRecord(
            key=self.key,
            executed=frozenset(self.executed),
            beacon_count=self.beacon_count,
            first_seen=self.first_seen,
            last_updated=self.last_updated,
            pages=frozenset(self.pages),
            first_seen_beacon=dict(self.first_seen_beacon),
            new_per_beacon=tuple(self.new_per_beacon),
        )


class CoverageStore:
    """Thread-safe per-resource coverage accumulator.

    When constructed with a `path`, every beacon is persisted durably before
    `record_beacon` returns.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self._lock = threading.RLock()
        self._records: dict[tuple[str, str], _Record] = {}
        self._path = Path(path) if path is not None else None
        if self._path is not None and self._path.exists():
            self._load_from(self._path)

    # ------------------------------------------------------------------
    # ingestion and queries

    def record_beacon(self, beacon: CoverageBeacon) -> CoverageRecord:
        if beacon.version != BEACON_VERSION:
            raise UnsupportedVersion(f"unsupported beacon version {beacon.version!r}")
        if not isinstance(beacon.ids, (list, tuple)):
            raise MalformedBeacon("beacon ids must be a sequence")
        now = beacon.received_at or time.time()
        with self._lock:
            rec = self._records.get((beacon.key.url, beacon.key.content_hash))
            if rec is None:
                rec = _Record(beacon.key, now)
                self._records[(beacon.key.url, beacon.key.content_hash)] = rec
            rec.beacon_count += 1
            new_ids = 0
            for fid in beacon.ids:
                if fid not in rec.executed:
                    rec.executed.add(fid)
                    rec.first_seen_beacon[fid] = rec.beacon_count
                    new_ids += 1
            rec.new_per_beacon.append(new_ids)
            if beacon.page_url:
                rec.pages.add(beacon.page_url)
            rec.last_updated = now
            snap = rec.snapshot()
            if self._path is not None:
                self._save_locked(self._path)
        return snap

    def executed_ids(self, key: ResourceKey) -> frozenset[str]:
        with self._lock:
            rec = self._records.get((key.url, key.content_hash))
            return frozenset(rec.executed) if rec else frozenset()

    def beacon_count(self, key: ResourceKey) -> int:
        with self._lock:
            rec = self._records.get((key.url, key.content_hash))
            return rec.beacon_count if rec else 0

    def record(self, key: ResourceKey) -> CoverageRecord | None:
        with self._lock:
            rec = self._records.get((key.url, key.content_hash))
            return rec.snapshot() if rec else None

    def records(self) -> list[CoverageRecord]:
        with self._lock:
            return [r.snapshot() for r in self._records.values()]

    def phase(self, key: ResourceKey, policy: PhasePolicy | None = None) -> ResourcePhase:
        policy = policy or PhasePolicy()
        if policy.freeze:
            return ResourcePhase.LEARNING
        if self.beacon_count(key) >= policy.min_beacons:
            return ResourcePhase.ELIDED
        return ResourcePhase.LEARNING

    # ------------------------------------------------------------------
    # persistence

    def save(self, path: str | os.PathLike | None = None) -> None:
        target = Path(path) if path is not None else self._path
        if target is None:
            raise ValueError("no path bound to this store")
        with self._lock:
            self._save_locked(target)

    def _save_locked(self, target: Path) -> None:
        lines = [_MAGIC]
        for rec in self._records.values():
            lines.append(json.dumps({
                "url": rec.key.url,
                "hash": rec.key.content_hash,
                "executed": sorted(rec.executed),
                "beacon_count": rec.beacon_count,
                "first_seen": rec.first_seen,
                "last_updated": rec.last_updated,
                "pages": sorted(rec.pages),
                "first_beacon": rec.first_seen_beacon,
                "new_per_beacon": rec.new_per_beacon,
            }, sort_keys=True))
        body = ("\n".join(lines) + "\n").encode("utf-8")
        footer = (_FOOTER_PREFIX + sha256(body).hexdigest() + "\n").encode("ascii")
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(target.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(body + footer)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, target)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "CoverageStore":
        store = cls(path=None)
        store._load_from(Path(path))
        store._path = Path(path)
        return store

    def _load_from(self, path: Path) -> None:
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise CorruptState(f"cannot read state file: {e}") from None
        text = raw.decode("utf-8", errors="replace")
        lines = text.splitlines(keepends=False)
        if not lines or not lines[-1].startswith(_FOOTER_PREFIX):
            raise CorruptState("state file has no checksum footer")
        footer = lines[-1]
        body_len = len(raw) - len((footer + "\n").encode("utf-8"))
        if body_len < 0 or not raw.endswith(b"\n"):
            raise CorruptState("state file is truncated")
        body = raw[:body_len]
        want = footer[len(_FOOTER_PREFIX):]
        if sha256(body).hexdigest() != want:
            raise CorruptState("state file checksum mismatch")
        body_lines = body.decode("utf-8").splitlines()
        if not body_lines or body_lines[0] != _MAGIC:
            raise CorruptState("unrecognized state file header")
        records: dict[tuple[str, str], _Record] = {}
        for line in body_lines[1:]:
            try:
                doc = json.loads(line)
                key = ResourceKey(url=doc["url"], content_hash=doc["hash"])
                rec = _Record(key, doc["first_seen"])
                rec.executed = set(doc["executed"])
                rec.beacon_count = int(doc["beacon_count"])
                rec.last_updated = doc["last_updated"]
                rec.pages = set(doc.get("pages", []))
                rec.first_seen_beacon = {str(k): int(v) for k, v in doc.get("first_beacon", {}).items()}
                rec.new_per_beacon = [int(v) for v in doc.get("new_per_beacon", [])]
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
                raise CorruptState(f"bad record line: {e}") from None
            records[(key.url, key.content_hash)] = rec
        with self._lock:
            self._records = records
