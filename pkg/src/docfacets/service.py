"""HTTP/JSON facade over a facet index snapshot.

GET /search     text terms (q), facet filters (f.<facet>=value, repeatable),
                date range (from/to) and pagination (page/page_size)
GET /doc/{id}   full text, per-facet tags and quick-view highlight spans
                for the caller's hl terms plus the document's own keywords
POST /mentions  upload a mention spec; documents are re-scanned and the
                mentions facet replaced atomically

Responses are canonical JSON (sorted keys, compact separators), so the same
snapshot always serves byte-identical answers and the CLI ``query`` command
can share this module verbatim.
"""

from __future__ import annotations

import json
import re
import threading
from datetime import timedelta
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Mapping
from urllib.parse import parse_qs, unquote, urlparse

from . import mentions as mentions_mod
from .facetindex import (
    FACETS,
    KEYWORD_CLASS,
    QUERY_CLASS,
    FacetIndex,
    FacetQuery,
    parse_timestamp,
)
from .pipeline import Store

DEFAULT_PAGE_SIZE = 20
MAX_PAGE_SIZE = 200
FACET_VALUE_LIMIT = 50
SNIPPET_CHARS = 160

_DATE_ONLY_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def query_from_params(params: Mapping[str, list[str]]) -> tuple[FacetQuery, int, int]:
    """Decode /search query parameters; raises ValueError on bad input."""
    known = {"q", "from", "to", "page", "page_size"}
    filters: dict[str, frozenset[str]] = {}
    for key, values in params.items():
        if key.startswith("f."):
            facet = key[2:]
            if facet not in FACETS:
                raise ValueError(f"unknown facet {facet!r}")
            filters[facet] = frozenset(v for v in values if v)
        elif key not in known:
            raise ValueError(f"unknown parameter {key!r}")

    terms = tuple(t for chunk in params.get("q", []) for t in chunk.split())
    date_from = date_to = None
    if params.get("from"):
        date_from = parse_timestamp(params["from"][-1])
    if params.get("to"):
        raw = params["to"][-1].strip()
        date_to = parse_timestamp(raw)
        if _DATE_ONLY_RE.match(raw):
            date_to = date_to + timedelta(days=1) - timedelta(microseconds=1)

    page = int(params.get("page", ["1"])[-1])
    page_size = int(params.get("page_size", [str(DEFAULT_PAGE_SIZE)])[-1])
    if page < 1:
        raise ValueError("page must be >= 1")
    page_size = max(1, min(page_size, MAX_PAGE_SIZE))
    query = FacetQuery(
        text_terms=terms, filters=filters, date_from=date_from, date_to=date_to
    )
    return query, page, page_size


def _snippet(text: str) -> str:
    flat = " ".join(text.split())
    return flat[:SNIPPET_CHARS]


def search_response(index: FacetIndex, params: Mapping[str, list[str]]) -> dict:
    query, page, page_size = query_from_params(params)
    result = index.search(query)
    start = (page - 1) * page_size
    page_ids = result.doc_ids[start:start + page_size]
    docs = []
    for doc_id in page_ids:
        entry = index.entry(doc_id)
        docs.append(
            {
                "id": doc_id,
                "path": entry.path,
                "format": entry.format_tag,
                "snippet": _snippet(entry.text),
            }
        )
    facets = {}
    for facet in FACETS:
        values = sorted(
            result.facet_counts[facet].items(), key=lambda kv: (-kv[1], kv[0])
        )[:FACET_VALUE_LIMIT]
        facets[facet] = [{"value": v, "count": c} for v, c in values]
    return {
        "total": len(result.doc_ids),
        "page": page,
        "page_size": page_size,
        "docs": docs,
        "facets": facets,
    }


def doc_response(index: FacetIndex, doc_id: str, hl_terms: list[str]) -> dict:
    entry = index.entry(doc_id)
    tags = index.tags_of(doc_id)
    highlight: dict[str, str] = {}
    for phrase in sorted(tags.get("keywords", frozenset())):
        highlight[phrase] = KEYWORD_CLASS
    for term in hl_terms:
        if term:
            highlight[term] = QUERY_CLASS
    view = index.quick_view(doc_id, highlight)
    return {
        "id": doc_id,
        "path": entry.path,
        "format": entry.format_tag,
        "author": entry.author,
        "last_modified": entry.last_modified.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "tags": {f: sorted(v) for f, v in tags.items() if v},
        "text": view.text,
        "marked": view.marked,
        "spans": [
            {"start": s.start, "end": s.end, "term": s.term, "class": s.cls}
            for s in view.spans
        ],
    }


class SearchService:
    """Serves an immutable index snapshot; mention uploads swap in a new one."""

    def __init__(self, index: FacetIndex, store: Store | None = None):
        self._index = index
        self._store = store
        self._jobs = 0
        self._lock = threading.Lock()

    @property
    def index(self) -> FacetIndex:
        return self._index

    def search(self, params: Mapping[str, list[str]]) -> dict:
        return search_response(self._index, params)

    def document(self, doc_id: str, hl_terms: list[str]) -> dict:
        return doc_response(self._index, doc_id, hl_terms)

    def apply_mention_spec(self, spec_text: str) -> dict:
        """Re-scan every indexed document and replace the mentions facet."""
        spec = mentions_mod.parse_mention_spec(spec_text, is_text=True)
        with self._lock:
            old = self._index
            new = FacetIndex()
            tagged = 0
            hits_table: dict[str, dict[str, int]] = {}
            for doc_id in old.doc_ids():
                entry = old.entry(doc_id)
                hits = mentions_mod.scan_text(entry.text, spec)
                if hits:
                    tagged += 1
                    hits_table[doc_id] = hits
                tags = {
                    f: set(v) for f, v in old.tags_of(doc_id).items()
                    if f != "mentions"
                }
                tags["mentions"] = set(hits)
                doc = _entry_to_document(entry)
                new.index_document(doc, tags)
            self._jobs += 1
            job_id = f"mention-scan-{self._jobs:04d}"
            self._index = new
            if self._store is not None:
                self._store.save_mention_hits(hits_table)
                self._store.save_index(new)
        return {
            "job_id": job_id,
            "status": "complete",
            "categories": spec.categories,
            "documents_tagged": tagged,
        }


def _entry_to_document(entry):
    from .ingest import Document

    return Document(
        doc_id=entry.doc_id,
        source_path=entry.path,
        format_tag=entry.format_tag,
        text=entry.text,
        author=entry.author,
        last_modified=entry.last_modified,
        folder_tags=frozenset(entry.tags.get("folder", frozenset())),
        byte_size=len(entry.text.encode("utf-8")),
    )


class _Handler(BaseHTTPRequestHandler):
    server_version = "docfacets/0.1"
    protocol_version = "HTTP/1.1"

    def _send(self, status: int, payload) -> None:
        body = canonical_json(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        # the browser frontend may be hosted by any static file server
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:  # type: ignore[attr-defined]
            super().log_message(fmt, *args)

    def do_GET(self):
        service: SearchService = self.server.service  # type: ignore[attr-defined]
        url = urlparse(self.path)
        try:
            if url.path == "/search":
                self._send(200, service.search(parse_qs(url.query)))
            elif url.path == "/health":
                self._send(200, {"status": "ok", "documents": len(service.index)})
            elif url.path.startswith("/doc/"):
                doc_id = unquote(url.path[len("/doc/"):])
                params = parse_qs(url.query)
                hl = [t for chunk in params.get("hl", []) for t in chunk.split()]
                try:
                    self._send(200, service.document(doc_id, hl))
                except KeyError:
                    self._send(404, {"error": f"unknown document {doc_id!r}"})
            else:
                self._send(404, {"error": "not found"})
        except ValueError as exc:
            self._send(400, {"error": str(exc)})
        except Exception:
            self._send(500, {"error": "internal error"})

    def do_POST(self):
        service: SearchService = self.server.service  # type: ignore[attr-defined]
        url = urlparse(self.path)
        if url.path != "/mentions":
            self._send(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length).decode("utf-8")
            self._send(200, service.apply_mention_spec(body))
        except ValueError as exc:
            self._send(400, {"error": str(exc)})
        except Exception:
            self._send(500, {"error": "internal error"})


class FacetHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, service: SearchService, verbose: bool = False):
        super().__init__(address, _Handler)
        self.service = service
        self.verbose = verbose


def serve(index: FacetIndex, host: str = "127.0.0.1", port: int = 8571,
          store: Store | None = None, verbose: bool = True) -> None:
    """Run the HTTP service until interrupted."""
    server = FacetHTTPServer((host, port), SearchService(index, store), verbose)
    try:
        server.serve_forever()
    finally:
        server.server_close()
