"""Shared fixture builders: synthetic corpora with known ground truth."""

from __future__ import annotations

import math
import random
from datetime import datetime, timedelta, timezone

from docfacets.ingest import Document

PLANTED_BIGRAMS = [
    ("data", "mining"),
    ("sensor", "fusion"),
    ("kernel", "regression"),
    ("topic", "models"),
    ("feature", "vectors"),
]

DECOY_BIGRAMS = [
    ("query", "expansion"),
    ("spam", "detection"),
    ("cache", "coherence"),
]

_CONNECTORS = ["of", "under", "with", "about", "between", "through", "during"]


def build_planted_document(total_words: int = 500, seed: int = 7) -> str:
    """A document whose top-5 keywords are forced to be PLANTED_BIGRAMS.

    The planted bigrams appear early and 4+ times each; decoys appear late
    and exactly twice; all other content words are separated by stopwords so
    they never form collocation candidates.  Token count is exactly
    ``total_words``.
    """
    rng = random.Random(seed)
    noise = iter(f"w{i:03d}" for i in range(10_000))

    sentences: list[list[str]] = []
    for a, b in PLANTED_BIGRAMS:  # early first occurrences
        sentences.append(["the", a, b, "in", next(noise)])
    for _ in range(3):  # planted repeats: frequent and strongly collocated
        for a, b in PLANTED_BIGRAMS:
            sentences.append(["some", a, b, "for", next(noise)])

    def filler() -> list[list[str]]:
        conn = rng.choice(_CONNECTORS)
        return [["the", next(noise), conn, next(noise)]]

    head = sum(len(s) for s in sentences)
    # Budget: decoys late, each twice (4 words per decoy sentence).
    decoy_words = 4 * 2 * len(DECOY_BIGRAMS)
    while head + decoy_words + 4 <= total_words - 4:
        s = filler()[0]
        sentences.append(s)
        head += len(s)
    for _ in range(2):
        for a, b in DECOY_BIGRAMS:
            sentences.append(["the", a, b, "again"])
    head = sum(len(s) for s in sentences)
    remaining = total_words - head
    assert remaining >= 0
    if remaining:
        tail = ["the"]
        while len(tail) < remaining:
            tail.append(next(noise))
            if len(tail) < remaining:
                tail.append("of")
        sentences.append(tail[:remaining])

    text = ". ".join(" ".join(s).capitalize() for s in sentences) + "."
    return text


def two_topic_corpus(
    n_docs: int = 100, doc_len: int = 50, vocab_size: int = 20, seed: int = 123
) -> tuple[dict[str, list[str]], dict[str, int]]:
    """Two disjoint-vocabulary topics, half the docs drawn from each."""
    rng = random.Random(seed)
    vocabs = (
        [f"alpha{i:02d}" for i in range(vocab_size)],
        [f"beta{i:02d}" for i in range(vocab_size)],
    )
    docs: dict[str, list[str]] = {}
    labels: dict[str, int] = {}
    for i in range(n_docs):
        topic = 0 if i < n_docs // 2 else 1
        doc_id = f"doc{i:03d}"
        docs[doc_id] = [rng.choice(vocabs[topic]) for _ in range(doc_len)]
        labels[doc_id] = topic
    return docs, labels


def separable_presence_corpus(
    n_docs: int = 200, seed: int = 42, overlap: int = 3
) -> tuple[dict[str, set[str]], dict[str, bool]]:
    """Word-presence documents with ~10% vocabulary overlap between classes."""
    rng = random.Random(seed)
    pos_vocab = [f"pos{i:02d}" for i in range(30)]
    neg_vocab = [f"neg{i:02d}" for i in range(30)]
    shared = [f"shared{i:02d}" for i in range(10)]
    presence: dict[str, set[str]] = {}
    labels: dict[str, bool] = {}
    for i in range(n_docs):
        is_pos = i % 2 == 0
        base = pos_vocab if is_pos else neg_vocab
        doc_id = f"d{i:03d}"
        presence[doc_id] = set(rng.sample(base, 12)) | set(rng.sample(shared, overlap))
        labels[doc_id] = is_pos
    return presence, labels


_WORDS = [f"term{i:02d}" for i in range(40)]
_KEYWORD_TAGS = [f"kw phrase{i}" for i in range(12)]
_TECH_TAGS = ["tech-a", "tech-b", "tech-c", "other"]
_REPORT_TAGS = ["TECHNICAL", "TEST", "PROGRAMMATIC", "OTHER"]
_MENTION_TAGS = ["PII", "FOUO", "IPADDR"]
_AUTHORS = ["alice", "bob", "carol", None]
_FOLDERS = [
    frozenset({"/"}),
    frozenset({"/", "a"}),
    frozenset({"/", "a", "a/b"}),
    frozenset({"/", "c"}),
]
_FORMATS = ["txt", "html", "md", "log"]


def synthetic_tagged_corpus(
    n_docs: int = 1000, seed: int = 99
) -> list[tuple[Document, dict[str, frozenset[str]]]]:
    """Documents plus discovered-facet tags for index-vs-scan equivalence."""
    rng = random.Random(seed)
    epoch = datetime(2013, 1, 1, tzinfo=timezone.utc)
    rows = []
    for i in range(n_docs):
        words = [rng.choice(_WORDS) for _ in range(rng.randint(5, 30))]
        text = " ".join(words)
        doc = Document(
            doc_id=f"doc{i:04d}",
            source_path=f"/corpus/file{i:04d}.txt",
            format_tag=rng.choice(_FORMATS),
            text=text,
            author=rng.choice(_AUTHORS),
            last_modified=epoch + timedelta(hours=rng.randint(0, 24 * 400)),
            folder_tags=rng.choice(_FOLDERS),
            byte_size=len(text),
        )
        tags = {
            "keywords": frozenset(rng.sample(_KEYWORD_TAGS, rng.randint(0, 4))),
            "topic_cluster": frozenset(
                str(t) for t in rng.sample(range(6), rng.randint(0, 2))
            ),
            "technology": frozenset({rng.choice(_TECH_TAGS)}),
            "report_type": frozenset({rng.choice(_REPORT_TAGS)}),
            "mentions": frozenset(rng.sample(_MENTION_TAGS, rng.randint(0, 2))),
        }
        rows.append((doc, tags))
    return rows


_THEMES = {
    "mining": (
        "Data mining finds hidden structure. The mining pipeline scores "
        "collocations and ranks candidate phrases. Analysts review data "
        "mining output for critical patterns."
    ),
    "networks": (
        "Neural networks learn representations. The network training loop "
        "updates weights. Deep neural networks classify documents into "
        "technology categories."
    ),
    "search": (
        "Faceted search narrows large collections. The search index stores "
        "postings and facet counts. Query refinement uses tag clouds over "
        "search results."
    ),
    "forensics": (
        "Digital forensics reviews workstation drives. The forensics team "
        "tags sensitive markings and folder paths. Evidence review covers "
        "email and web history files."
    ),
}

SSN_SAMPLES = ("123-45-6789", "987-65-4321", "111-22-3333", "555-44-6666", "222-33-4444")


def build_fixture_tree(root, n_files: int = 64, seed: int = 2013):
    """A small heterogeneous corpus tree with planted SSNs and sidecars.

    Returns (ssn_relpaths, all_relpaths).  Every file gets a unique marker
    token so contents (and therefore doc_ids) are distinct.
    """
    from pathlib import Path

    root = Path(root)
    rng = random.Random(seed)
    folders = ["", "reports", "reports/2013", "logs", "web"]
    for folder in folders[1:]:
        (root / folder).mkdir(parents=True, exist_ok=True)
    theme_names = sorted(_THEMES)
    epoch = datetime(2013, 3, 1, tzinfo=timezone.utc)

    ssn_files = []
    all_files = []
    for i in range(n_files):
        theme = theme_names[i % len(theme_names)]
        folder = folders[i % len(folders)]
        ext = ["txt", "txt", "md", "log", "html"][i % 5]
        name = f"{theme}_{i:03d}.{ext}"
        rel = f"{folder}/{name}" if folder else name
        body = f"{_THEMES[theme]} Marker unique{i:03d} closes the file."
        if i % 13 == 0:
            ssn = SSN_SAMPLES[(i // 13) % len(SSN_SAMPLES)]
            body += f" Contact SSN: {ssn} on record."
            ssn_files.append(rel)
        if ext == "html":
            content = f"<html><body><p>{body}</p></body></html>"
        else:
            content = body
        path = root / rel
        path.write_text(content, encoding="utf-8")
        when = epoch + timedelta(days=i, hours=rng.randint(0, 23))
        ts = when.timestamp()
        os_utime(path, ts)
        if i % 9 == 0:
            path.with_name(path.name + ".meta").write_text(
                f"author=analyst{i % 3}\n", encoding="utf-8"
            )
        all_files.append(rel)
    (root / "binary.zip").write_bytes(b"PK\x03\x04 not text")
    return ssn_files, all_files


def os_utime(path, ts):
    import os

    os.utime(path, (ts, ts))


MENTION_SPEC_TEXT = "PII\tregex\t\\d{3}-\\d{2}-\\d{4}\nFOUO\tterm\tFor Official Use Only\n"


def llr_oracle(n11: int, n12: int, n21: int, n22: int) -> float:
    """Independent LLR evaluation via the entropy-form identity:
    2 * (sum n ln n - sum row ln row - sum col ln col + N ln N)."""

    def xlx(x: float) -> float:
        return x * math.log(x) if x > 0 else 0.0

    n = n11 + n12 + n21 + n22
    cells = xlx(n11) + xlx(n12) + xlx(n21) + xlx(n22)
    rows = xlx(n11 + n12) + xlx(n21 + n22)
    cols = xlx(n11 + n21) + xlx(n12 + n22)
    return 2.0 * (cells - rows - cols + xlx(n))


def entropy_oracle(n_pos: int, n_neg: int) -> float:
    total = n_pos + n_neg
    acc = 0.0
    for c in (n_pos, n_neg):
        if c > 0:
            p = c / total
            acc -= p * math.log2(p)
    return acc


def ig_oracle(word: str, pos_docs: dict[str, set[str]], neg_docs: dict[str, set[str]]) -> float:
    """Brute-force information gain by explicit subset enumeration."""
    with_pos = sum(1 for words in pos_docs.values() if word in words)
    with_neg = sum(1 for words in neg_docs.values() if word in words)
    without_pos = len(pos_docs) - with_pos
    without_neg = len(neg_docs) - with_neg
    total = len(pos_docs) + len(neg_docs)
    gain = entropy_oracle(len(pos_docs), len(neg_docs))
    n_with = with_pos + with_neg
    n_without = without_pos + without_neg
    if n_with:
        gain -= n_with / total * entropy_oracle(with_pos, with_neg)
    if n_without:
        gain -= n_without / total * entropy_oracle(without_pos, without_neg)
    return gain
