"""Mention tagging from user-supplied expression files.

A spec file has one ``category<TAB>kind<TAB>pattern`` entry per line, where
kind is ``term`` (literal phrase), ``gazetteer`` (path to a one-term-per-line
dictionary, expanded at parse time) or ``regex``.  Terms and gazetteer
entries match case-insensitively on whole words; regexes run case-sensitive
over the raw text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

TERM = "TERM"
GAZETTEER = "GAZETTEER"
REGEX = "REGEX"

_KINDS = {"term": TERM, "gazetteer": GAZETTEER, "regex": REGEX}

# Word boundary that treats underscores as separators, matching the tokenizer.
_BOUND_L = r"(?<![^\W_])"
_BOUND_R = r"(?![^\W_])"


@dataclass(frozen=True)
class MentionEntry:
    category: str
    kind: str
    pattern: str
    compiled: re.Pattern


@dataclass(frozen=True)
class MentionSpec:
    entries: tuple[MentionEntry, ...]

    @property
    def categories(self) -> list[str]:
        return sorted({e.category for e in self.entries})

    def merged_with(self, other: "MentionSpec") -> "MentionSpec":
        return MentionSpec(entries=self.entries + other.entries)


def term_pattern(term: str) -> re.Pattern:
    """Case-insensitive whole-word matcher; internal whitespace is flexible."""
    words = term.split()
    if not words:
        raise ValueError("empty term")
    body = r"\s+".join(re.escape(w) for w in words)
    return re.compile(_BOUND_L + body + _BOUND_R, re.IGNORECASE)


def _compile_entry(category: str, kind: str, pattern: str) -> list[MentionEntry]:
    if kind == TERM:
        return [MentionEntry(category, TERM, pattern, term_pattern(pattern))]
    if kind == GAZETTEER:
        entries = []
        for raw in Path(pattern).read_text("utf-8").splitlines():
            term = raw.strip()
            if not term or term.startswith("#"):
                continue
            entries.append(MentionEntry(category, GAZETTEER, term, term_pattern(term)))
        return entries
    try:
        return [MentionEntry(category, REGEX, pattern, re.compile(pattern))]
    except re.error as exc:
        raise ValueError(f"bad regex {pattern!r}: {exc}") from None


def parse_mention_spec(source: str | Path, *, is_text: bool = False) -> MentionSpec:
    """Parse a spec file (or raw text with ``is_text``) into compiled entries.

    Malformed lines raise with their line number; gazetteer paths are
    resolved relative to the spec file.
    """
    if is_text:
        text = str(source)
        base = Path(".")
    else:
        text = Path(source).read_text("utf-8")
        base = Path(source).parent
    entries: list[MentionEntry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected category<TAB>kind<TAB>pattern")
        category, kind_raw, pattern = (p.strip() for p in parts)
        if not category:
            raise ValueError(f"line {lineno}: empty category")
        kind = _KINDS.get(kind_raw.lower())
        if kind is None:
            raise ValueError(f"line {lineno}: unknown kind {kind_raw!r}")
        if not pattern:
            raise ValueError(f"line {lineno}: empty pattern")
        if kind == GAZETTEER and not Path(pattern).is_absolute():
            pattern = str(base / pattern)
        entries.extend(_compile_entry(category, kind, pattern))
    return MentionSpec(entries=tuple(entries))


def scan_text(text: str, spec: MentionSpec) -> dict[str, int]:
    """category -> non-overlapping match count; absent when zero."""
    counts: dict[str, int] = {}
    for entry in spec.entries:
        n = sum(1 for _ in entry.compiled.finditer(text))
        if n:
            counts[entry.category] = counts.get(entry.category, 0) + n
    return counts


def scan_document(doc, spec: MentionSpec) -> set[tuple[str, int]]:
    """Matched (category, span count) pairs for a Document or raw text."""
    text = doc if isinstance(doc, str) else doc.text
    return set(scan_text(text, spec).items())


def scan_many(docs: Iterable, spec: MentionSpec) -> dict[str, dict[str, int]]:
    """doc_id -> {category: count} over an iterable of Documents."""
    out: dict[str, dict[str, int]] = {}
    for doc in docs:
        hits = scan_text(doc.text, spec)
        if hits:
            out[doc.doc_id] = hits
    return out
