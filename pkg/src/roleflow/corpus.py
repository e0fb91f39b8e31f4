"""Post corpora, link source typing, analysis windows and account selection."""

from __future__ import annotations

import calendar
import csv
import enum
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from urllib.parse import urlsplit

import numpy as np

log = logging.getLogger(__name__)


class SourceType(str, enum.Enum):
    EXTREMIST = "extremist"
    BIASED = "biased"
    FAKE = "fake"
    CONSPIRACY = "conspiracy"
    OTHER = "other"

    @classmethod
    def parse(cls, name: str) -> "SourceType":
        key = name.strip().lower()
        aliases = {"fakenews": "fake", "fake_news": "fake", "fake news": "fake"}
        return cls(aliases.get(key, key))


ANALYZED_TYPES = (SourceType.EXTREMIST, SourceType.BIASED, SourceType.FAKE, SourceType.CONSPIRACY)


@dataclass(frozen=True)
class PostRecord:
    post_id: str
    account_id: str
    timestamp: int
    text: str = ""
    links: tuple[str, ...] = ()
    likes: int = 0
    shares: int = 0
    comments: int = 0

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError(f"post {self.post_id}: negative timestamp")
        for name in ("likes", "shares", "comments"):
            if getattr(self, name) < 0:
                raise ValueError(f"post {self.post_id}: negative {name}")

    @classmethod
    def from_dict(cls, d: Mapping) -> "PostRecord":
        links = d.get("links") or []
        if isinstance(links, str) or not all(isinstance(u, str) for u in links):
            raise ValueError("links must be a list of strings")
        ts = d["timestamp"]
        if isinstance(ts, bool) or not isinstance(ts, (int, float)) or ts != int(ts):
            raise ValueError("timestamp must be integer epoch seconds")
        return cls(
            post_id=str(d["post_id"]),
            account_id=str(d["account_id"]),
            timestamp=int(ts),
            text=str(d.get("text") or ""),
            links=tuple(links),
            likes=int(d.get("likes", 0)),
            shares=int(d.get("shares", 0)),
            comments=int(d.get("comments", 0)),
        )

    def to_dict(self) -> dict:
        return {
            "post_id": self.post_id,
            "account_id": self.account_id,
            "timestamp": self.timestamp,
            "text": self.text,
            "links": list(self.links),
            "likes": self.likes,
            "shares": self.shares,
            "comments": self.comments,
        }


@dataclass
class LoadReport:
    path: str
    loaded: int = 0
    skipped: int = 0
    skipped_lines: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"path": self.path, "loaded": self.loaded, "skipped": self.skipped,
                "skipped_lines": self.skipped_lines[:100]}


def load_corpus(path, report: LoadReport | None = None) -> list[PostRecord]:
    """Read a JSON-lines post file.

    Malformed lines (bad JSON, missing fields, duplicate ``post_id``) are
    skipped and counted in ``report``. An unreadable file raises ``OSError``.
    """
    path = Path(path)
    if report is None:
        report = LoadReport(str(path))
    posts: list[PostRecord] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = PostRecord.from_dict(json.loads(line))
                if rec.post_id in seen:
                    raise ValueError(f"duplicate post_id {rec.post_id}")
            except (ValueError, KeyError, TypeError) as exc:
                log.debug("line %d skipped: %s", lineno, exc)
                report.skipped += 1
                report.skipped_lines.append(lineno)
                continue
            seen.add(rec.post_id)
            posts.append(rec)
    report.loaded = len(posts)
    print(f"loaded {report.loaded} records, skipped {report.skipped} ({path})", file=sys.stderr)
    return posts


def write_corpus(posts: Iterable[PostRecord], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for p in posts:
            fh.write(json.dumps(p.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def csv_to_jsonl(csv_path, jsonl_path, links_sep: str = " ") -> int:
    """Convert a flat CSV export to the JSON-lines post format.

    The CSV must carry the post fields as columns; ``links`` holds URLs
    separated by ``links_sep``. Returns the number of rows written.
    """
    n = 0
    with open(csv_path, newline="", encoding="utf-8") as src, \
            open(jsonl_path, "w", encoding="utf-8") as dst:
        for row in csv.DictReader(src):
            links = [u for u in (row.get("links") or "").split(links_sep) if u]
            rec = {
                "post_id": row["post_id"],
                "account_id": row["account_id"],
                "timestamp": int(float(row["timestamp"])),
                "text": row.get("text", ""),
                "links": links,
                "likes": int(row.get("likes") or 0),
                "shares": int(row.get("shares") or 0),
                "comments": int(row.get("comments") or 0),
            }
            dst.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
            n += 1
    return n


# -- link classification ---------------------------------------------------

def _split_url(url: str) -> tuple[str, str]:
    """Return (host, path) with scheme, port, credentials and "www." removed."""
    url = url.strip()
    if "://" not in url and not url.startswith("//"):
        url = "//" + url
    parts = urlsplit(url)
    host = (parts.hostname or "").lower().rstrip(".")
    if not host:
        raise ValueError(f"no host in {url!r}")
    if host.startswith("www."):
        host = host[4:]
    return host, parts.path or ""


@dataclass
class DomainRegistry:
    """Domain and path-prefix patterns mapped to source types."""

    entries: dict[str, SourceType] = field(default_factory=dict)

    def __post_init__(self):
        normalized: dict[str, SourceType] = {}
        for pattern, st in self.entries.items():
            key = self.normalize_pattern(pattern)
            st = SourceType.parse(st) if isinstance(st, str) else st
            if key in normalized and normalized[key] != st:
                raise ValueError(f"pattern {pattern!r} mapped to two source types")
            normalized[key] = st
        self.entries = normalized
        self._compiled = sorted(
            ((len(k), *self._split_pattern(k), st) for k, st in normalized.items()),
            key=lambda e: -e[0],
        )

    @staticmethod
    def normalize_pattern(pattern: str) -> str:
        host, path = _split_url(pattern)
        return host + path.rstrip("/")

    @staticmethod
    def _split_pattern(key: str) -> tuple[str, str]:
        host, _, path = key.partition("/")
        return host, ("/" + path) if path else ""

    @classmethod
    def load(cls, path) -> "DomainRegistry":
        entries: dict[str, SourceType] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                try:
                    pattern, st = line.split("\t")
                    stype = SourceType.parse(st)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: expected 'pattern<TAB>source_type'") from None
                if stype is SourceType.OTHER:
                    raise ValueError(f"{path}:{lineno}: 'other' is not a registry type")
                key = cls.normalize_pattern(pattern)
                if key in entries and entries[key] != stype:
                    raise ValueError(f"{path}:{lineno}: {pattern!r} already mapped to {entries[key].value}")
                entries[key] = stype
        return cls(entries)

    def count_by_type(self) -> dict[SourceType, int]:
        out = {st: 0 for st in ANALYZED_TYPES}
        for st in self.entries.values():
            out[st] += 1
        return out

    def match(self, url: str) -> str | None:
        """Longest registry pattern matching ``url``, or None."""
        host, path = _split_url(url)
        for _, phost, ppath, _st in self._compiled:
            if host != phost and not host.endswith("." + phost):
                continue
            if ppath and not (path == ppath or path.startswith(ppath.rstrip("/") + "/")):
                continue
            return phost + ppath
        return None

    def classify(self, url: str) -> SourceType:
        return classify_link(url, self)


def classify_link(url: str, registry: DomainRegistry) -> SourceType:
    try:
        key = registry.match(url)
    except ValueError:
        log.warning("unparseable URL %r classified as other", url)
        return SourceType.OTHER
    return SourceType.OTHER if key is None else registry.entries[key]


def link_domain(url: str) -> str | None:
    try:
        return _split_url(url)[0]
    except ValueError:
        return None


# -- windows ---------------------------------------------------------------

def add_months(ts: int, months: int) -> int:
    d = datetime.fromtimestamp(ts, tz=timezone.utc)
    idx = d.month - 1 + months
    year, month = d.year + idx // 12, idx % 12 + 1
    day = min(d.day, calendar.monthrange(year, month)[1])
    return int(d.replace(year=year, month=month, day=day).timestamp())


@dataclass(frozen=True)
class WindowSpec:
    start: int
    window_length: int = 6
    window_count: int = 4

    def __post_init__(self):
        if self.start < 0 or self.window_length < 1 or self.window_count < 1:
            raise ValueError(f"invalid window spec {self}")

    @classmethod
    def from_date(cls, date: str, window_length: int = 6, window_count: int = 4) -> "WindowSpec":
        d = datetime.fromisoformat(date)
        if d.tzinfo is None:
            d = d.replace(tzinfo=timezone.utc)
        return cls(int(d.timestamp()), window_length, window_count)

    def boundaries(self) -> list[int]:
        """Window edges; window i is the half-open interval [edges[i], edges[i+1])."""
        return [add_months(self.start, i * self.window_length) for i in range(self.window_count + 1)]

    def month_edges(self, window_index: int) -> list[int]:
        base = self.window_length * window_index
        return [add_months(self.start, base + m) for m in range(self.window_length + 1)]

    def window_of(self, ts: int) -> int | None:
        edges = self.boundaries()
        if ts < edges[0] or ts >= edges[-1]:
            return None
        return int(np.searchsorted(edges, ts, side="right")) - 1


@dataclass
class AccountWindowActivity:
    account_id: str
    window_index: int
    posts: list[PostRecord] = field(default_factory=list)
    link_posts: list[PostRecord] = field(default_factory=list)
    extremist_link_posts: list[PostRecord] = field(default_factory=list)
    extremist_urls: set[str] = field(default_factory=set)

    def add(self, post: PostRecord, registry: DomainRegistry) -> None:
        self.posts.append(post)
        if not post.links:
            return
        self.link_posts.append(post)
        ext = [u for u in post.links if classify_link(u, registry) is SourceType.EXTREMIST]
        if ext:
            self.extremist_link_posts.append(post)
            self.extremist_urls.update(u.strip() for u in ext)

    @property
    def active(self) -> bool:
        return bool(self.extremist_link_posts)


@dataclass
class SliceResult:
    activities: dict[tuple[str, int], AccountWindowActivity]
    assigned: int
    dropped: int


def slice_windows(posts: Sequence[PostRecord], spec: WindowSpec,
                  registry: DomainRegistry | None = None) -> SliceResult:
    """Group posts into (account, window) activities; out-of-range posts are dropped."""
    registry = registry or DomainRegistry()
    edges = spec.boundaries()
    acts: dict[tuple[str, int], AccountWindowActivity] = {}
    dropped = 0
    for p in sorted(posts, key=lambda p: (p.timestamp, p.post_id)):
        if p.timestamp < edges[0] or p.timestamp >= edges[-1]:
            dropped += 1
            continue
        w = int(np.searchsorted(edges, p.timestamp, side="right")) - 1
        key = (p.account_id, w)
        if key not in acts:
            acts[key] = AccountWindowActivity(p.account_id, w)
        acts[key].add(p, registry)
    return SliceResult(acts, len(posts) - dropped, dropped)


def unique_extremist_link_counts(activities: Mapping[tuple[str, int], AccountWindowActivity],
                                 per_window: bool = False) -> dict[str, int]:
    """Distinct extremist URLs per account, over all windows or the best single window."""
    if per_window:
        out: dict[str, int] = {}
        for (acc, _), act in activities.items():
            out[acc] = max(out.get(acc, 0), len(act.extremist_urls))
        return out
    urls: dict[str, set[str]] = {}
    for (acc, _), act in activities.items():
        urls.setdefault(acc, set()).update(act.extremist_urls)
    return {acc: len(u) for acc, u in urls.items()}


def apply_account_threshold(activities, min_unique_extremist_links: int = 10,
                            per_window: bool = False) -> set[str]:
    if min_unique_extremist_links < 1:
        raise ValueError("threshold must be a positive integer")
    counts = unique_extremist_link_counts(activities, per_window)
    return {acc for acc, n in counts.items() if n >= min_unique_extremist_links}


def threshold_additions(activities, base: int, lower: Sequence[int],
                        per_window: bool = False) -> dict[int, set[str]]:
    """Accounts that a lower threshold would add on top of the ``base`` selection."""
    kept = apply_account_threshold(activities, base, per_window)
    out = {}
    for t in lower:
        if t >= base:
            raise ValueError(f"threshold {t} is not below base {base}")
        out[t] = apply_account_threshold(activities, t, per_window) - kept
    return out


def percentile_cutoff(values: Sequence[float], percentile: float) -> float:
    """Linear-interpolation percentile between order statistics."""
    if len(values) == 0:
        raise ValueError("percentile of an empty list")
    if not 0 <= percentile <= 100:
        raise ValueError("percentile must be in [0, 100]")
    xs = sorted(float(v) for v in values)
    pos = (len(xs) - 1) * percentile / 100.0
    lo = math.floor(pos)
    frac = pos - lo
    if frac == 0 or lo + 1 >= len(xs):
        return xs[lo]
    return xs[lo] + (xs[lo + 1] - xs[lo]) * frac
