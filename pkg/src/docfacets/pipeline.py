"""Persisted pipeline stages: each CLI command reads the previous stage's
artifacts from the store directory and writes its own.

Layout inside a store directory:

    docs.jsonl             ingest     one JSON document per line
    ingest_report.tsv      ingest     skipped files and warnings
    keywords.tsv           extract    doc_id, rank, phrase, score
    topic_model.txt        topics     sampler dump (docfacets-lda v1)
    topic_assignments.tsv  topics     doc_id -> topic ids above threshold
    topic_tags.tsv         topics     topic id -> most probable words
    technology_tags.tsv    train      doc_id -> predicted technology tag
    report_type_tags.tsv   train      doc_id -> report type
    models/<kind>/<label>.model       classifier dumps
    mention_hits.tsv       mentions   doc_id, category, count
    index.json             index      facet index snapshot
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from .facetindex import FacetIndex
from .ingest import DEFAULT_EXTENSIONS, Document, IngestConfig

DOCS_FILE = "docs.jsonl"
INGEST_REPORT_FILE = "ingest_report.tsv"
KEYWORDS_FILE = "keywords.tsv"
TOPIC_MODEL_FILE = "topic_model.txt"
TOPIC_ASSIGNMENTS_FILE = "topic_assignments.tsv"
TOPIC_TAGS_FILE = "topic_tags.tsv"
TECHNOLOGY_TAGS_FILE = "technology_tags.tsv"
REPORT_TYPE_TAGS_FILE = "report_type_tags.tsv"
MENTION_HITS_FILE = "mention_hits.tsv"
INDEX_FILE = "index.json"
MODELS_DIR = "models"


class StageError(RuntimeError):
    """A required upstream artifact is missing."""

    def __init__(self, stage: str, artifact: Path):
        self.stage = stage
        super().__init__(
            f"missing artifact {artifact.name}: run the '{stage}' stage first"
        )


def _parse_bool(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class PipelineConfig:
    """Whole-pipeline defaults from one plain-text key-value file.

    Bare keys (root, include_hidden, extensions) configure ingestion; the
    remaining stages use dotted keys: kera.k, kera.method, kera.min_count,
    kera.prune, topics.k, topics.iterations, topics.seed, topics.threshold,
    train.manifest, mentions.spec, serve.port.  Command-line flags override
    file values.
    """

    root: str | None = None
    include_hidden: bool = False
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS
    kera_k: int = 10
    kera_method: str = "llr"
    kera_min_count: int = 2
    kera_prune: bool = False
    topics_k: int | None = None
    topics_iterations: int = 100
    topics_seed: int = 0
    topics_threshold: float = 0.3
    train_manifest: str | None = None
    mention_spec: str | None = None
    port: int = 8571

    def __post_init__(self):
        if not 0.0 < self.topics_threshold < 1.0:
            raise ValueError("topics.threshold must be in (0, 1)")
        for name, value in (
            ("kera.k", self.kera_k),
            ("kera.min_count", self.kera_min_count),
            ("topics.k", self.topics_k),
            ("topics.iterations", self.topics_iterations),
        ):
            if value is not None and value < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.kera_method not in ("llr", "pmi"):
            raise ValueError(f"unknown kera.method {self.kera_method!r}")

    @property
    def ingest(self) -> IngestConfig | None:
        if self.root is None:
            return None
        return IngestConfig(
            root=self.root,
            include_hidden=self.include_hidden,
            extensions=self.extensions,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        values: dict[str, str] = {}
        for lineno, raw in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()

        kwargs: dict = {}
        if "root" in values:
            kwargs["root"] = values["root"]
        if "include_hidden" in values:
            kwargs["include_hidden"] = _parse_bool(values["include_hidden"])
        if "extensions" in values:
            kwargs["extensions"] = tuple(
                e.strip().lower() for e in values["extensions"].split(",") if e.strip()
            )
        int_keys = {
            "kera.k": "kera_k",
            "kera.min_count": "kera_min_count",
            "topics.k": "topics_k",
            "topics.iterations": "topics_iterations",
            "topics.seed": "topics_seed",
            "serve.port": "port",
        }
        for key, attr in int_keys.items():
            if key in values:
                kwargs[attr] = int(values[key])
        if "kera.method" in values:
            kwargs["kera_method"] = values["kera.method"].lower()
        if "kera.prune" in values:
            kwargs["kera_prune"] = _parse_bool(values["kera.prune"])
        if "topics.threshold" in values:
            kwargs["topics_threshold"] = float(values["topics.threshold"])
        if "train.manifest" in values:
            kwargs["train_manifest"] = values["train.manifest"]
        if "mentions.spec" in values:
            kwargs["mention_spec"] = values["mentions.spec"]
        known = {"root", "include_hidden", "extensions", "kera.method", "kera.prune",
                 "topics.threshold", "train.manifest", "mentions.spec", *int_keys}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"{path}: unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)


class Store:
    """Paths and serialization for one pipeline workspace."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, name: str) -> Path:
        return self.root / name

    def require(self, name: str, stage: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise StageError(stage, p)
        return p

    def ensure_dir(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    # -- documents -----------------------------------------------------

    def save_documents(self, docs: Iterable[Document]) -> int:
        self.ensure_dir()
        n = 0
        # Last write wins per doc_id: duplicate file contents collapse here.
        by_id: dict[str, Document] = {}
        for doc in docs:
            by_id[doc.doc_id] = doc
        with self.path(DOCS_FILE).open("w", encoding="utf-8") as fh:
            for doc_id in sorted(by_id):
                doc = by_id[doc_id]
                row = {
                    "doc_id": doc.doc_id,
                    "source_path": doc.source_path,
                    "format_tag": doc.format_tag,
                    "text": doc.text,
                    "author": doc.author,
                    "last_modified": doc.last_modified.astimezone(timezone.utc)
                    .strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "folder_tags": sorted(doc.folder_tags),
                    "byte_size": doc.byte_size,
                }
                fh.write(json.dumps(row, sort_keys=True) + "\n")
                n += 1
        return n

    def load_documents(self, stage: str = "ingest") -> dict[str, Document]:
        path = self.require(DOCS_FILE, stage)
        docs: dict[str, Document] = {}
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            ts = row["last_modified"].replace("Z", "+00:00")
            doc = Document(
                doc_id=row["doc_id"],
                source_path=row["source_path"],
                format_tag=row["format_tag"],
                text=row["text"],
                author=row.get("author"),
                last_modified=datetime.fromisoformat(ts),
                folder_tags=frozenset(row.get("folder_tags", [])),
                byte_size=row.get("byte_size", 0),
            )
            docs[doc.doc_id] = doc
        return docs

    def save_ingest_report(self, report) -> None:
        lines = []
        for path, fmt in report.skipped:
            lines.append(f"skip\t{fmt}\t{path}")
        for path, message in report.warnings:
            lines.append(f"warn\t{message}\t{path}")
        self.path(INGEST_REPORT_FILE).write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )

    # -- keywords --------------------------------------------------------

    def save_keywords(self, keywords: Mapping[str, list]) -> None:
        """keywords: doc_id -> ranked KeywordCandidates (or strings)."""
        lines = []
        for doc_id in sorted(keywords):
            for rank, cand in enumerate(keywords[doc_id], start=1):
                if isinstance(cand, str):
                    phrase, score = cand, 0.0
                else:
                    phrase, score = cand.text, cand.score
                lines.append(f"{doc_id}\t{rank}\t{phrase}\t{score!r}")
        self.path(KEYWORDS_FILE).write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )

    def load_keywords(self, stage: str = "extract") -> dict[str, list[tuple[str, float]]]:
        path = self.require(KEYWORDS_FILE, stage)
        out: dict[str, list[tuple[str, float]]] = {}
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            doc_id, _rank, phrase, score = line.split("\t")
            out.setdefault(doc_id, []).append((phrase, float(score)))
        return out

    # -- simple tag tables -------------------------------------------------

    def save_tag_table(self, name: str, tags: Mapping[str, Iterable[str]]) -> None:
        lines = []
        for doc_id in sorted(tags):
            for value in sorted(set(tags[doc_id])):
                lines.append(f"{doc_id}\t{value}")
        self.path(name).write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )

    def load_tag_table(self, name: str) -> dict[str, set[str]]:
        path = self.path(name)
        out: dict[str, set[str]] = {}
        if not path.exists():
            return out
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            doc_id, value = line.split("\t", 1)
            out.setdefault(doc_id, set()).add(value)
        return out

    def save_mention_hits(self, hits: Mapping[str, Mapping[str, int]]) -> None:
        lines = []
        for doc_id in sorted(hits):
            for category in sorted(hits[doc_id]):
                lines.append(f"{doc_id}\t{category}\t{hits[doc_id][category]}")
        self.path(MENTION_HITS_FILE).write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )

    def load_mention_hits(self) -> dict[str, dict[str, int]]:
        path = self.path(MENTION_HITS_FILE)
        out: dict[str, dict[str, int]] = {}
        if not path.exists():
            return out
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            doc_id, category, count = line.split("\t")
            out.setdefault(doc_id, {})[category] = int(count)
        return out

    # -- manifests ---------------------------------------------------------

    @staticmethod
    def load_manifest(path: str | Path) -> dict[str, set[str]]:
        """label<TAB>doc_id lines -> label -> ids."""
        out: dict[str, set[str]] = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected label<TAB>doc_id")
            label, doc_id = parts
            out.setdefault(label.strip(), set()).add(doc_id.strip())
        return out

    def models_dir(self, kind: str) -> Path:
        return self.path(MODELS_DIR) / kind

    # -- index ----------------------------------------------------------

    def gather_tags(self) -> dict[str, dict[str, set[str]]]:
        """doc_id -> facet -> values from every tag artifact present."""
        tags: dict[str, dict[str, set[str]]] = {}

        def add(doc_id: str, facet: str, value: str) -> None:
            tags.setdefault(doc_id, {}).setdefault(facet, set()).add(value)

        keywords_path = self.path(KEYWORDS_FILE)
        if keywords_path.exists():
            for doc_id, pairs in self.load_keywords().items():
                for phrase, _score in pairs:
                    add(doc_id, "keywords", phrase)
        for doc_id, topic_ids in self.load_tag_table(TOPIC_ASSIGNMENTS_FILE).items():
            for tid in topic_ids:
                add(doc_id, "topic_cluster", tid)
        for doc_id, values in self.load_tag_table(TECHNOLOGY_TAGS_FILE).items():
            for v in values:
                add(doc_id, "technology", v)
        for doc_id, values in self.load_tag_table(REPORT_TYPE_TAGS_FILE).items():
            for v in values:
                add(doc_id, "report_type", v)
        for doc_id, hits in self.load_mention_hits().items():
            for category in hits:
                add(doc_id, "mentions", category)
        return tags

    def build_index(self) -> FacetIndex:
        docs = self.load_documents(stage="ingest")
        tags = self.gather_tags()
        index = FacetIndex()
        for doc_id, doc in docs.items():
            index.index_document(doc, tags.get(doc_id, {}))
        return index

    def save_index(self, index: FacetIndex) -> None:
        tmp = self.path(INDEX_FILE + ".tmp")
        index.save(tmp)
        tmp.replace(self.path(INDEX_FILE))

    def load_index(self, stage: str = "index") -> FacetIndex:
        return FacetIndex.load(self.require(INDEX_FILE, stage))
