"""Tweet corpus store: JSONL ingestion, binary persistence, streaming, time buckets.

Store layout (documented in docs/formats.md):
  <dir>/records.bin   -- concatenated records, each:
                           id         u64 LE
                           created_at i64 LE (unix seconds, UTC)
                           author_len u16 LE, author UTF-8 bytes
                           text_len   u32 LE, text UTF-8 bytes
  <dir>/manifest.json -- schema version, ingest stats, date range, record count.

Ingestion is single-writer; streaming readers are read-only and may run
concurrently with each other.
"""

import calendar
import json
import logging
import struct
from dataclasses import dataclass, asdict, field
from datetime import datetime, timezone, timedelta
from pathlib import Path

logger = logging.getLogger(__name__)

__all__ = [
    "TweetRecord",
    "CorpusStats",
    "TimeBucket",
    "CorpusStore",
    "ingest_jsonl",
    "stream_corpus",
    "time_buckets",
]

MANIFEST_NAME = "manifest.json"
RECORDS_NAME = "records.bin"
SCHEMA_VERSION = 1

_REC_HEAD = struct.Struct("<Qq")  # id, created_at
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")

# accepted key spellings per field, tried in order
_KEYS = {
    "id": ("id",),
    "created_at": ("created_at", "date"),
    "author": ("author", "user"),
    "text": ("text", "content"),
}


@dataclass(frozen=True)
class TweetRecord:
    """One post: unique id, author handle, UTC timestamp, text."""

    id: int
    author: str
    created_at: int  # unix seconds, UTC
    text: str


@dataclass
class CorpusStats:
    """Ingest audit counters. lines_read always equals the sum of the four outcomes."""

    lines_read: int = 0
    records_kept: int = 0
    duplicates_dropped: int = 0
    malformed_dropped: int = 0
    out_of_range_dropped: int = 0
    distinct_authors: int = 0
    min_date: int | None = None
    max_date: int | None = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class TimeBucket:
    granularity: str  # day | week | month
    bucket_start: int  # unix seconds, UTC
    doc_ids: list = field(default_factory=list)


def _parse_date(value) -> int:
    """Parse a timestamp field to unix seconds (UTC). Raises ValueError if unparseable."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, (int, float)):
        return int(value)
    if isinstance(value, str):
        s = value.strip().replace("Z", "+00:00")
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp())
    raise ValueError(f"unsupported timestamp type: {type(value).__name__}")


def _extract(obj: dict, logical: str):
    for key in _KEYS[logical]:
        if key in obj:
            return obj[key]
    raise KeyError(logical)


def _day_bound(date_str: str, end: bool) -> int:
    dt = datetime.strptime(date_str, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    if end:
        dt = dt + timedelta(days=1) - timedelta(seconds=1)
    return int(dt.timestamp())


class CorpusStore:
    """Read access to a persisted corpus directory."""

    def __init__(self, directory):
        self.directory = Path(directory)
        manifest_path = self.directory / MANIFEST_NAME
        records_path = self.directory / RECORDS_NAME
        if not manifest_path.exists() or not records_path.exists():
            raise FileNotFoundError(f"not a corpus store: {self.directory}")
        with open(manifest_path, encoding="utf-8") as f:
            self.manifest = json.load(f)
        if self.manifest.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported corpus schema in {manifest_path}: "
                f"{self.manifest.get('schema_version')!r}"
            )
        self.records_path = records_path

    @property
    def n_records(self) -> int:
        return self.manifest["stats"]["records_kept"]

    @property
    def stats(self) -> CorpusStats:
        return CorpusStats(**self.manifest["stats"])

    def __iter__(self):
        return self.iter_records()

    def iter_records(self):
        """Yield TweetRecords in persisted order. Repeated calls yield identical sequences."""
        with open(self.records_path, "rb") as f:
            while True:
                head = f.read(_REC_HEAD.size)
                if not head:
                    break
                if len(head) < _REC_HEAD.size:
                    raise IOError(f"corrupt corpus store: {self.records_path}")
                rec_id, created_at = _REC_HEAD.unpack(head)
                try:
                    (alen,) = _U16.unpack(f.read(_U16.size))
                    raw_author = f.read(alen)
                    (tlen,) = _U32.unpack(f.read(_U32.size))
                    raw_text = f.read(tlen)
                    if len(raw_author) < alen or len(raw_text) < tlen:
                        raise struct.error("short read")
                    author = raw_author.decode("utf-8")
                    text = raw_text.decode("utf-8")
                except (struct.error, UnicodeDecodeError) as e:
                    raise IOError(f"corrupt corpus store: {self.records_path}") from e
                yield TweetRecord(id=rec_id, author=author, created_at=created_at, text=text)


def ingest_jsonl(input_path, out_dir, since: str, until: str) -> CorpusStats:
    """Ingest newline-delimited JSON into a corpus store.

    Records keep their input order. A line is malformed if it is not JSON, is
    missing a field, has an unparseable date, or has empty text after trimming;
    malformed lines are counted, skipped and logged with their line number.
    Duplicate ids keep the first occurrence. Records outside [since, until]
    (whole days, UTC) are counted as out of range.
    """
    lo = _day_bound(since, end=False)
    hi = _day_bound(until, end=True)
    if lo > hi:
        raise ValueError(f"since {since} is after until {until}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stats = CorpusStats()
    seen_ids = set()
    authors = set()

    try:
        fin = open(input_path, "rb")
    except OSError as e:
        raise IOError(f"cannot read input {input_path}: {e}") from e

    with fin, open(out / RECORDS_NAME, "wb") as fout:
        for lineno, raw in enumerate(fin, start=1):
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            stats.lines_read += 1
            try:
                obj = json.loads(line)
                rec_id = int(_extract(obj, "id"))
                if rec_id < 0:
                    raise ValueError("negative id")
                created_at = _parse_date(_extract(obj, "created_at"))
                author = str(_extract(obj, "author"))
                text = str(_extract(obj, "text"))
                if not text.strip():
                    raise ValueError("empty text")
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
                stats.malformed_dropped += 1
                logger.warning("line %d malformed, skipped: %s", lineno, e)
                continue
            if not (lo <= created_at <= hi):
                stats.out_of_range_dropped += 1
                continue
            if rec_id in seen_ids:
                stats.duplicates_dropped += 1
                continue
            seen_ids.add(rec_id)
            authors.add(author)
            stats.records_kept += 1
            stats.min_date = created_at if stats.min_date is None else min(stats.min_date, created_at)
            stats.max_date = created_at if stats.max_date is None else max(stats.max_date, created_at)
            a = author.encode("utf-8")
            t = text.encode("utf-8")
            fout.write(_REC_HEAD.pack(rec_id, created_at))
            fout.write(_U16.pack(len(a)))
            fout.write(a)
            fout.write(_U32.pack(len(t)))
            fout.write(t)

    stats.distinct_authors = len(authors)
    assert stats.lines_read == (
        stats.records_kept
        + stats.duplicates_dropped
        + stats.malformed_dropped
        + stats.out_of_range_dropped
    )
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "records_file": RECORDS_NAME,
        "window": {"since": since, "until": until, "timezone": "UTC"},
        "stats": stats.as_dict(),
    }
    with open(out / MANIFEST_NAME, "w", encoding="utf-8") as f:
        json.dump(manifest, f, sort_keys=True, indent=2)
        f.write("\n")
    return stats


def stream_corpus(corpus, batch_size: int):
    """Yield lists of TweetRecords of size batch_size (last batch may be short)."""
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    store = corpus if isinstance(corpus, CorpusStore) else CorpusStore(corpus)
    batch = []
    for rec in store.iter_records():
        batch.append(rec)
        if len(batch) == batch_size:
            yield batch
            batch = []
    if batch:
        yield batch


def _bucket_start(ts: int, granularity: str) -> int:
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    if granularity == "day":
        start = datetime(dt.year, dt.month, dt.day, tzinfo=timezone.utc)
    elif granularity == "week":
        monday = dt.date() - timedelta(days=dt.weekday())
        start = datetime(monday.year, monday.month, monday.day, tzinfo=timezone.utc)
    elif granularity == "month":
        start = datetime(dt.year, dt.month, 1, tzinfo=timezone.utc)
    else:
        raise ValueError(f"unknown granularity: {granularity!r}")
    return int(start.timestamp())


def _next_bucket_start(ts: int, granularity: str) -> int:
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    if granularity == "day":
        return ts + 86400
    if granularity == "week":
        return ts + 7 * 86400
    days = calendar.monthrange(dt.year, dt.month)[1]
    return int((dt + timedelta(days=days)).timestamp())


def time_buckets(corpus, granularity: str = "month") -> list:
    """Partition corpus records into ordered time buckets.

    Every record lands in exactly one bucket; intermediate empty buckets are
    emitted zero-filled so time series have a continuous axis.
    """
    store = corpus if isinstance(corpus, CorpusStore) else CorpusStore(corpus)
    by_start = {}
    for rec in store.iter_records():
        start = _bucket_start(rec.created_at, granularity)
        by_start.setdefault(start, []).append(rec.id)
    if not by_start:
        raise ValueError("corpus is empty")
    buckets = []
    start = min(by_start)
    last = max(by_start)
    while start <= last:
        buckets.append(
            TimeBucket(granularity=granularity, bucket_start=start, doc_ids=by_start.get(start, []))
        )
        start = _next_bucket_start(start, granularity)
    return buckets
