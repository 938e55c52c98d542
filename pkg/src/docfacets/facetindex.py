"""In-memory inverted index with per-facet tag postings.

Queries combine full-text terms (AND), facet filters (OR within a facet, AND
across facets) and a date range; facet value counts are always computed over
the filtered result set so clouds re-generate as filters narrow.  Snapshots
persist to a versioned JSON file; postings are rebuilt from document text on
load.  A published index is immutable -- re-indexing builds a new one.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import textproc
from .ingest import Document

FACETS = (
    "keywords",
    "topic_cluster",
    "technology",
    "report_type",
    "mentions",
    "file_type",
    "folder",
    "author",
    "date",
)
METADATA_FACETS = ("file_type", "folder", "author", "date")

SNAPSHOT_FORMAT = "docfacets-index"
SNAPSHOT_VERSION = 1

MARK_OPEN = "⟦"   # white square bracket, unlikely to clash with text
MARK_CLOSE = "⟧"

QUERY_CLASS = "query"
KEYWORD_CLASS = "keyword"

_BOUND_L = r"(?<![^\W_])"
_BOUND_R = r"(?![^\W_])"


@dataclass(frozen=True)
class FacetQuery:
    text_terms: tuple[str, ...] = ()
    filters: Mapping[str, frozenset[str]] = field(default_factory=dict)
    date_from: datetime | None = None
    date_to: datetime | None = None

    def __post_init__(self):
        for facet in self.filters:
            if facet not in FACETS:
                raise ValueError(f"unknown facet {facet!r}")


@dataclass(frozen=True)
class FacetResult:
    doc_ids: tuple[str, ...]
    facet_counts: dict[str, dict[str, int]]


@dataclass(frozen=True)
class HighlightSpan:
    start: int
    end: int
    term: str
    cls: str


@dataclass(frozen=True)
class QuickView:
    text: str
    marked: str
    spans: tuple[HighlightSpan, ...]


def _day_bucket(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%d")


def _isoformat(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(value: str) -> datetime:
    """ISO date or datetime; bare dates mean midnight UTC."""
    value = value.strip()
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


@dataclass
class _Entry:
    doc_id: str
    path: str
    format_tag: str
    author: str | None
    last_modified: datetime
    text: str
    term_freq: Counter
    tags: dict[str, frozenset[str]]


class FacetIndex:
    """Inverted full-text index plus facet tag postings."""

    def __init__(self) -> None:
        self._entries: dict[str, _Entry] = {}
        self._postings: dict[str, set[str]] = {}
        self._facet_docs: dict[str, dict[str, set[str]]] = {f: {} for f in FACETS}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._entries

    def doc_ids(self) -> list[str]:
        return sorted(self._entries)

    def entry(self, doc_id: str) -> _Entry:
        if doc_id not in self._entries:
            raise KeyError(f"unknown document {doc_id!r}")
        return self._entries[doc_id]

    def tags_of(self, doc_id: str) -> dict[str, frozenset[str]]:
        return dict(self.entry(doc_id).tags)

    # -- building ----------------------------------------------------------

    def index_document(
        self, doc: Document, tags: Mapping[str, Iterable[str]] | None = None
    ) -> None:
        """Add or replace one document.

        Metadata facets (file_type, folder, author, date) are derived from
        the Document itself; the caller provides the discovered facets.
        Re-indexing a doc_id replaces its previous tags entirely.
        """
        tags = tags or {}
        for facet in tags:
            if facet not in FACETS:
                raise ValueError(f"unknown facet {facet!r}")
        full: dict[str, frozenset[str]] = {f: frozenset() for f in FACETS}
        for facet, values in tags.items():
            full[facet] = frozenset(str(v) for v in values)
        full["file_type"] = frozenset({doc.format_tag}) | full["file_type"]
        full["folder"] = frozenset(doc.folder_tags) | full["folder"]
        if doc.author:
            full["author"] = frozenset({doc.author}) | full["author"]
        full["date"] = frozenset({_day_bucket(doc.last_modified)}) | full["date"]

        if doc.doc_id in self._entries:
            self._remove(doc.doc_id)
        freq = Counter(t.norm for t in textproc.tokenize(doc.text))
        entry = _Entry(
            doc_id=doc.doc_id,
            path=doc.source_path,
            format_tag=doc.format_tag,
            author=doc.author,
            last_modified=doc.last_modified,
            text=doc.text,
            term_freq=freq,
            tags=full,
        )
        self._entries[doc.doc_id] = entry
        for term in freq:
            self._postings.setdefault(term, set()).add(doc.doc_id)
        for facet, values in full.items():
            buckets = self._facet_docs[facet]
            for value in values:
                buckets.setdefault(value, set()).add(doc.doc_id)

    def _remove(self, doc_id: str) -> None:
        entry = self._entries.pop(doc_id)
        for term in entry.term_freq:
            docs = self._postings.get(term)
            if docs:
                docs.discard(doc_id)
                if not docs:
                    del self._postings[term]
        for facet, values in entry.tags.items():
            buckets = self._facet_docs[facet]
            for value in values:
                docs = buckets.get(value)
                if docs:
                    docs.discard(doc_id)
                    if not docs:
                        del buckets[value]

    # -- searching ---------------------------------------------------------

    def search(self, query: FacetQuery) -> FacetResult:
        """Evaluate text AND facet AND date constraints; count facet values.

        Results are ranked by summed query-term frequency (descending), ties
        by doc_id.  Counts cover the filtered result set.
        """
        matching: set[str] | None = None
        terms = [t.lower() for t in query.text_terms if t]
        for term in terms:
            docs = self._postings.get(term, set())
            matching = docs.copy() if matching is None else matching & docs
            if not matching:
                break
        if matching is None:
            matching = set(self._entries)

        for facet, values in query.filters.items():
            if not values:
                continue
            allowed: set[str] = set()
            buckets = self._facet_docs[facet]
            for value in values:
                allowed |= buckets.get(value, set())
            matching &= allowed

        if query.date_from is not None:
            matching = {
                d for d in matching
                if self._entries[d].last_modified >= query.date_from
            }
        if query.date_to is not None:
            matching = {
                d for d in matching
                if self._entries[d].last_modified <= query.date_to
            }

        def relevance(doc_id: str) -> int:
            tf = self._entries[doc_id].term_freq
            return sum(tf.get(t, 0) for t in terms)

        ordered = sorted(matching, key=lambda d: (-relevance(d), d))

        counts: dict[str, dict[str, int]] = {}
        for facet in FACETS:
            facet_counter: Counter = Counter()
            for doc_id in matching:
                facet_counter.update(self._entries[doc_id].tags[facet])
            counts[facet] = dict(facet_counter)
        return FacetResult(doc_ids=tuple(ordered), facet_counts=counts)

    # -- quick view --------------------------------------------------------

    def quick_view(
        self, doc_id: str, highlight_terms: Mapping[str, str] | Iterable[str]
    ) -> QuickView:
        """Mark whole-word, case-insensitive occurrences of highlight terms.

        ``highlight_terms`` maps term -> span class (plain iterables get the
        query class).  Overlaps resolve longest-match-first with no nesting;
        query terms outrank discovered keywords at equal spans.
        """
        entry = self.entry(doc_id)
        if not isinstance(highlight_terms, Mapping):
            highlight_terms = {t: QUERY_CLASS for t in highlight_terms}
        cls_rank = {QUERY_CLASS: 0, KEYWORD_CLASS: 1}

        raw: list[tuple[int, int, str, str]] = []
        for term, cls in highlight_terms.items():
            words = term.split()
            if not words:
                continue
            body = r"\s+".join(re.escape(w) for w in words)
            pattern = re.compile(_BOUND_L + body + _BOUND_R, re.IGNORECASE)
            for m in pattern.finditer(entry.text):
                raw.append((m.start(), m.end(), term, cls))
        raw.sort(key=lambda s: (s[0], -(s[1] - s[0]), cls_rank.get(s[3], 9), s[2]))

        spans: list[HighlightSpan] = []
        cursor = 0
        for start, end, term, cls in raw:
            if start >= cursor:
                spans.append(HighlightSpan(start=start, end=end, term=term, cls=cls))
                cursor = end

        pieces: list[str] = []
        cursor = 0
        for span in spans:
            pieces.append(entry.text[cursor:span.start])
            pieces.append(MARK_OPEN + entry.text[span.start:span.end] + MARK_CLOSE)
            cursor = span.end
        pieces.append(entry.text[cursor:])
        return QuickView(text=entry.text, marked="".join(pieces), spans=tuple(spans))

    # -- persistence -------------------------------------------------------

    def save(self, path: str | Path) -> None:
        docs = []
        for doc_id in sorted(self._entries):
            e = self._entries[doc_id]
            docs.append(
                {
                    "id": e.doc_id,
                    "path": e.path,
                    "format": e.format_tag,
                    "author": e.author,
                    "last_modified": _isoformat(e.last_modified),
                    "text": e.text,
                    "tags": {f: sorted(v) for f, v in e.tags.items() if v},
                }
            )
        payload = {
            "format": SNAPSHOT_FORMAT,
            "version": SNAPSHOT_VERSION,
            "docs": docs,
        }
        Path(path).write_text(
            json.dumps(payload, sort_keys=True, ensure_ascii=False), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "FacetIndex":
        payload = json.loads(Path(path).read_text("utf-8"))
        if payload.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"not a {SNAPSHOT_FORMAT} snapshot: {path}")
        if payload.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {payload.get('version')}")
        index = cls()
        for row in payload["docs"]:
            tags = {f: frozenset(v) for f, v in row.get("tags", {}).items()}
            doc = Document(
                doc_id=row["id"],
                source_path=row["path"],
                format_tag=row["format"],
                text=row["text"],
                author=row.get("author"),
                last_modified=parse_timestamp(row["last_modified"]),
                folder_tags=frozenset(tags.get("folder", frozenset())),
                byte_size=len(row["text"].encode("utf-8")),
            )
            index.index_document(doc, {f: v for f, v in tags.items()})
        return index


def brute_force_search(
    docs: Sequence[tuple[Document, Mapping[str, frozenset[str]]]], query: FacetQuery
) -> FacetResult:
    """Reference linear scan with the same semantics as FacetIndex.search.

    Kept alongside the index as the oracle the index is tested against;
    do not "optimize" it.
    """
    rows = []
    for doc, tags in docs:
        full = {f: frozenset(tags.get(f, frozenset())) for f in FACETS}
        full["file_type"] |= {doc.format_tag}
        full["folder"] |= set(doc.folder_tags)
        if doc.author:
            full["author"] |= {doc.author}
        full["date"] |= {_day_bucket(doc.last_modified)}
        rows.append((doc, full))

    terms = [t.lower() for t in query.text_terms if t]
    result = []
    for doc, full in rows:
        tf = Counter(t.norm for t in textproc.tokenize(doc.text))
        if any(tf.get(t, 0) == 0 for t in terms):
            continue
        ok = True
        for facet, values in query.filters.items():
            if values and not (full[facet] & values):
                ok = False
                break
        if not ok:
            continue
        if query.date_from is not None and doc.last_modified < query.date_from:
            continue
        if query.date_to is not None and doc.last_modified > query.date_to:
            continue
        result.append((doc, full, sum(tf.get(t, 0) for t in terms)))

    result.sort(key=lambda item: (-item[2], item[0].doc_id))
    counts: dict[str, dict[str, int]] = {f: {} for f in FACETS}
    for _, full, _ in result:
        for facet, values in full.items():
            for value in values:
                counts[facet][value] = counts[facet].get(value, 0) + 1
    return FacetResult(
        doc_ids=tuple(d.doc_id for d, _, _ in result), facet_counts=counts
    )
