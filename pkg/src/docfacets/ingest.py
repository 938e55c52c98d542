"""Directory ingestion: walk a tree, extract text and metadata, emit Documents.

Extraction handles plain-text flavors (txt, md, log, csv) and HTML; binary
formats are a pluggable boundary and are skipped with a record.  Document
identity is the SHA-256 of the extracted text, so re-ingesting identical
content yields the identical doc_id and duplicate files collapse at index
time.  Author metadata comes from an optional ``<filename>.meta`` sidecar
(one ``key=value`` per line).
"""

from __future__ import annotations

import hashlib
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path, PurePosixPath

DEFAULT_EXTENSIONS = ("txt", "md", "log", "csv", "html", "htm")
ROOT_FOLDER_TAG = "/"
SIDECAR_SUFFIX = ".meta"

_BLANK_RUN_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class Document:
    """One ingested file, normalized and ready for tagging."""

    doc_id: str
    source_path: str
    format_tag: str
    text: str
    author: str | None
    last_modified: datetime
    folder_tags: frozenset[str]
    byte_size: int


@dataclass(frozen=True)
class IngestConfig:
    root: str
    include_hidden: bool = False
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS

    @classmethod
    def from_file(cls, path: str | Path) -> "IngestConfig":
        """Parse a plain-text key-value config (root, include_hidden, extensions)."""
        values: dict[str, str] = {}
        for raw in Path(path).read_text("utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
        if "root" not in values:
            raise ValueError("config missing 'root'")
        exts = values.get("extensions", "")
        extensions = (
            tuple(e.strip().lower() for e in exts.split(",") if e.strip())
            if exts
            else DEFAULT_EXTENSIONS
        )
        include_hidden = values.get("include_hidden", "false").lower() in ("1", "true", "yes")
        return cls(root=values["root"], include_hidden=include_hidden, extensions=extensions)


@dataclass
class IngestReport:
    """Per-run log of skipped files and non-fatal warnings."""

    skipped: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)
    emitted: int = 0


def detect_format(path: str | Path) -> str:
    """Lowercased extension after the last dot, or "none"."""
    name = Path(path).name
    if "." not in name or name.rsplit(".", 1)[1] == "":
        return "none"
    return name.rsplit(".", 1)[1].lower()


def normalize_text(text: str) -> str:
    """Normalize line endings to LF, drop NULs, collapse whitespace runs.

    A run with no newline becomes one space, with one newline a single LF,
    and with two or more a paragraph break (two LFs).
    """
    text = text.replace("\r\n", "\n").replace("\r", "\n").replace("\x00", "")

    def collapse(match: re.Match) -> str:
        newlines = match.group().count("\n")
        if newlines == 0:
            return " "
        return "\n" if newlines == 1 else "\n\n"

    return _BLANK_RUN_RE.sub(collapse, text).strip()


class _HTMLTextExtractor(HTMLParser):
    _SKIP = {"script", "style"}
    _BREAKS = {
        "p", "div", "br", "li", "ul", "ol", "tr", "table", "h1", "h2", "h3",
        "h4", "h5", "h6", "title", "section", "article", "header", "footer",
        "blockquote", "pre",
    }

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self._chunks: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1
        elif tag in self._BREAKS:
            self._chunks.append("\n")

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1
        elif tag in self._BREAKS:
            self._chunks.append("\n")

    def handle_data(self, data):
        if not self._skip_depth:
            self._chunks.append(data)

    def text(self) -> str:
        return "".join(self._chunks)


def strip_html(markup: str) -> str:
    parser = _HTMLTextExtractor()
    parser.feed(markup)
    parser.close()
    return parser.text()


def extract_text(path: str | Path, format_tag: str) -> str:
    """Decode a supported file to normalized plain text (lossy UTF-8)."""
    raw = Path(path).read_bytes()
    decoded = raw.decode("utf-8", errors="replace")
    if format_tag in ("html", "htm"):
        decoded = strip_html(decoded)
    return normalize_text(decoded)


def extract_metadata(
    path: str | Path, report: IngestReport | None = None
) -> tuple[str | None, datetime]:
    """(author, last_modified) for a file; author from the sidecar if any."""
    path = Path(path)
    mtime = datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc)
    sidecar = path.with_name(path.name + SIDECAR_SUFFIX)
    author = None
    if sidecar.exists():
        try:
            for raw in sidecar.read_text("utf-8").splitlines():
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad sidecar line: {raw!r}")
                key, value = line.split("=", 1)
                if key.strip() == "author":
                    author = value.strip() or None
        except (ValueError, OSError) as exc:
            author = None
            if report is not None:
                report.warnings.append((str(path), f"sidecar ignored: {exc}"))
    return author, mtime


def folder_tags_for(source_path: str | Path, root: str | Path) -> frozenset[str]:
    """Every ancestor directory of the file relative to root, plus the root marker."""
    rel = Path(source_path).resolve().relative_to(Path(root).resolve())
    tags = {ROOT_FOLDER_TAG}
    parent = PurePosixPath(rel.as_posix()).parent
    while str(parent) != ".":
        tags.add(str(parent))
        parent = parent.parent
    return frozenset(tags)


def _is_hidden(name: str) -> bool:
    return name.startswith(".")


def _candidate_files(root: Path, config: IngestConfig) -> list[Path]:
    files: list[Path] = []
    for dirpath, dirnames, filenames in os.walk(root):
        if not config.include_hidden:
            dirnames[:] = [d for d in dirnames if not _is_hidden(d)]
            filenames = [f for f in filenames if not _is_hidden(f)]
        for name in filenames:
            files.append(Path(dirpath) / name)
    return sorted(files)


def _load_document(
    path: Path, root: Path, report: IngestReport
) -> Document | None:
    format_tag = detect_format(path)
    try:
        text = extract_text(path, format_tag)
        author, mtime = extract_metadata(path, report)
        byte_size = path.stat().st_size
    except OSError as exc:
        report.warnings.append((str(path), f"unreadable: {exc}"))
        return None
    return Document(
        doc_id=hashlib.sha256(text.encode("utf-8")).hexdigest(),
        source_path=str(path.resolve()),
        format_tag=format_tag,
        text=text,
        author=author,
        last_modified=mtime,
        folder_tags=folder_tags_for(path, root),
        byte_size=byte_size,
    )


def walk_and_extract(
    root: str | Path,
    config: IngestConfig | None = None,
    *,
    report: IngestReport | None = None,
    workers: int = 1,
):
    """Yield a Document for every supported file under root.

    Unsupported extensions are counted in ``report.skipped``; unreadable files
    become warnings and the stream continues.  Sidecar ``.meta`` files are
    consumed as metadata, never emitted or counted.  An unreadable root is
    fatal.  Emission order is unspecified but the emitted set is deterministic
    for any worker count.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"ingest root is not a readable directory: {root}")
    config = config or IngestConfig(root=str(root))
    report = report if report is not None else IngestReport()
    allowed = {e.lower() for e in config.extensions}

    targets: list[Path] = []
    for path in _candidate_files(root, config):
        if path.name.endswith(SIDECAR_SUFFIX):
            continue
        fmt = detect_format(path)
        if fmt not in allowed:
            report.skipped.append((str(path), fmt))
            continue
        targets.append(path)

    if workers <= 1:
        for path in targets:
            doc = _load_document(path, root, report)
            if doc is not None:
                report.emitted += 1
                yield doc
        return

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for doc in pool.map(lambda p: _load_document(p, root, report), targets):
            if doc is not None:
                report.emitted += 1
                yield doc
