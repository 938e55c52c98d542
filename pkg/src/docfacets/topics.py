"""Topic clustering with LDA fit by collapsed Gibbs sampling.

Documents get every topic whose smoothed proportion exceeds a threshold
(0.3 by default), so clusters are soft and overlapping.  Topics are labeled
either by their most probable words or, far more readably, by a keyword tag
cloud built over the cluster's documents.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kera, textproc

ASSIGN_THRESHOLD = 0.3
DEFAULT_BETA = 0.01
MODEL_FORMAT = "docfacets-lda v1"


@dataclass
class TopicModelState:
    """Fitted sampler state: counts, per-token assignments and hyperparameters."""

    k: int
    vocab: tuple[str, ...]
    doc_ids: tuple[str, ...]
    doc_tokens: list[list[int]]
    assignments: list[list[int]]
    doc_topic_counts: np.ndarray
    topic_word_counts: np.ndarray
    topic_totals: np.ndarray
    alpha_hyper: float
    beta_hyper: float
    rng_seed: int
    iterations: int

    def doc_index(self, doc_id: str) -> int:
        return self.doc_ids.index(doc_id)

    def proportions(self, d: int) -> np.ndarray:
        """Smoothed topic proportions for document d; sums to 1."""
        n = len(self.doc_tokens[d])
        return (self.doc_topic_counts[d] + self.alpha_hyper) / (n + self.k * self.alpha_hyper)


def check_count_invariants(state: TopicModelState) -> None:
    for d, tokens in enumerate(state.doc_tokens):
        if int(state.doc_topic_counts[d].sum()) != len(tokens):
            raise AssertionError(f"doc {d}: topic counts do not sum to its length")
    for k in range(state.k):
        if int(state.topic_word_counts[k].sum()) != int(state.topic_totals[k]):
            raise AssertionError(f"topic {k}: word counts do not sum to its total")


def prepare_corpus(
    tagged_docs: Mapping[str, Sequence[textproc.Token]], min_doc_freq: int = 2
) -> dict[str, list[str]]:
    """Word lists for LDA: drop stopwords/numbers and very rare words.

    Words must appear in at least ``min_doc_freq`` documents; documents left
    empty by the filters are dropped.
    """
    kept: dict[str, list[str]] = {}
    doc_freq: dict[str, int] = {}
    for doc_id, tokens in tagged_docs.items():
        words = [
            t.norm for t in tokens if t.pos not in (textproc.STOPWORD, textproc.NUMBER)
        ]
        kept[doc_id] = words
        for w in set(words):
            doc_freq[w] = doc_freq.get(w, 0) + 1
    vocab = {w for w, c in doc_freq.items() if c >= min_doc_freq}
    out = {}
    for doc_id, words in kept.items():
        filtered = [w for w in words if w in vocab]
        if filtered:
            out[doc_id] = filtered
    return out


def fit_lda(
    docs: Mapping[str, Sequence[str]],
    k: int,
    iterations: int = 100,
    seed: int = 0,
    *,
    beta_hyper: float = DEFAULT_BETA,
    check_invariants: bool = False,
) -> TopicModelState:
    """Collapsed Gibbs sampling over word lists keyed by document id.

    Each token's topic is resampled from
    p(z=k) proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)
    with the token's own count removed.  alpha defaults to 50/k.  The fit is
    deterministic for a given seed.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not docs:
        raise ValueError("empty corpus")
    for doc_id, words in docs.items():
        if not words:
            raise ValueError(f"document {doc_id!r} has no usable tokens")

    doc_ids = tuple(sorted(docs))
    vocab = tuple(sorted({w for words in docs.values() for w in words}))
    word_id = {w: i for i, w in enumerate(vocab)}
    doc_tokens = [[word_id[w] for w in docs[d]] for d in doc_ids]
    total_tokens = sum(len(t) for t in doc_tokens)
    if k > total_tokens:
        raise ValueError("k exceeds total token count")

    v = len(vocab)
    alpha = 50.0 / k
    beta = beta_hyper
    vbeta = v * beta
    rng = random.Random(seed)

    # Plain lists beat numpy here: the sampler touches single cells a million
    # times per fit and list indexing is several times cheaper.
    doc_topic = [[0] * k for _ in doc_tokens]
    topic_word = [[0] * v for _ in range(k)]
    topic_total = [0] * k
    assignments: list[list[int]] = []
    for d, tokens in enumerate(doc_tokens):
        zs = []
        dt = doc_topic[d]
        for w in tokens:
            z = rng.randrange(k)
            zs.append(z)
            dt[z] += 1
            topic_word[z][w] += 1
            topic_total[z] += 1
        assignments.append(zs)

    weights = [0.0] * k
    for sweep in range(iterations):
        for d, tokens in enumerate(doc_tokens):
            dt = doc_topic[d]
            zs = assignments[d]
            for n, w in enumerate(tokens):
                z = zs[n]
                dt[z] -= 1
                topic_word[z][w] -= 1
                topic_total[z] -= 1
                total = 0.0
                for t in range(k):
                    val = (dt[t] + alpha) * (topic_word[t][w] + beta) / (topic_total[t] + vbeta)
                    total += val
                    weights[t] = total
                u = rng.random() * total
                z = 0
                while weights[z] < u:
                    z += 1
                zs[n] = z
                dt[z] += 1
                topic_word[z][w] += 1
                topic_total[z] += 1
        if check_invariants:
            for d, tokens in enumerate(doc_tokens):
                assert sum(doc_topic[d]) == len(tokens), f"sweep {sweep}: doc {d} count drift"
            for t in range(k):
                assert sum(topic_word[t]) == topic_total[t], f"sweep {sweep}: topic {t} drift"

    return TopicModelState(
        k=k,
        vocab=vocab,
        doc_ids=doc_ids,
        doc_tokens=doc_tokens,
        assignments=assignments,
        doc_topic_counts=np.array(doc_topic, dtype=np.int64),
        topic_word_counts=np.array(topic_word, dtype=np.int64),
        topic_totals=np.array(topic_total, dtype=np.int64),
        alpha_hyper=alpha,
        beta_hyper=beta,
        rng_seed=seed,
        iterations=iterations,
    )


def assign_topics(
    state: TopicModelState, threshold: float = ASSIGN_THRESHOLD
) -> dict[str, set[int]]:
    """doc_id -> topics whose smoothed proportion strictly exceeds threshold."""
    out: dict[str, set[int]] = {}
    for d, doc_id in enumerate(state.doc_ids):
        props = state.proportions(d)
        out[doc_id] = {t for t in range(state.k) if props[t] > threshold}
    return out


def topic_tags(state: TopicModelState, topic_id: int, n: int = 10) -> list[str]:
    """The n most probable vocabulary words for a topic; ties by word id."""
    if not 0 <= topic_id < state.k:
        raise ValueError(f"invalid topic id {topic_id}")
    if not 1 <= n <= len(state.vocab):
        raise ValueError("n out of range")
    counts = state.topic_word_counts[topic_id]
    order = sorted(range(len(state.vocab)), key=lambda w: (-counts[w], w))
    return [state.vocab[w] for w in order[:n]]


def rank_topics(state: TopicModelState, assignment: Mapping[str, set[int]]) -> list[int]:
    """Topics ordered by assigned-document count descending, ties by id."""
    counts = [0] * state.k
    for topics in assignment.values():
        for t in topics:
            counts[t] += 1
    return sorted(range(state.k), key=lambda t: (-counts[t], t))


def choose_k(corpus_size: int) -> int:
    """Heuristic topic count from the collection size, clamped to [5, 50]."""
    if corpus_size < 1:
        raise ValueError("corpus size must be >= 1")
    return min(max(math.ceil(corpus_size / 100) + 4, 5), 50)


def label_cluster_with_kera(
    cluster_docs: Iterable, k_tags: int = 10, options: kera.KeraOptions = kera.DEFAULT_OPTIONS
) -> list[tuple[str, int]]:
    """Tag cloud over a cluster: per-document keywords, aggregated.

    ``cluster_docs`` yields objects with doc_id/text attributes (Documents)
    or (doc_id, text) pairs.
    """
    per_doc = []
    for doc in cluster_docs:
        doc_id, text = doc if isinstance(doc, tuple) else (doc.doc_id, doc.text)
        per_doc.append((doc_id, kera.extract_keywords(text, options=options)))
    if not per_doc:
        raise ValueError("empty cluster")
    return kera.build_tag_cloud(per_doc)[:k_tags]


def save_model(state: TopicModelState, path: str | Path) -> None:
    """Line-oriented text dump: header, vocabulary, then per-doc word:topic pairs."""
    lines = [f"#{MODEL_FORMAT}"]
    lines.append(f"#k\t{state.k}")
    lines.append(f"#alpha\t{state.alpha_hyper!r}")
    lines.append(f"#beta\t{state.beta_hyper!r}")
    lines.append(f"#seed\t{state.rng_seed}")
    lines.append(f"#iterations\t{state.iterations}")
    for w in state.vocab:
        lines.append(f"V\t{w}")
    for d, doc_id in enumerate(state.doc_ids):
        pairs = " ".join(
            f"{w}:{z}" for w, z in zip(state.doc_tokens[d], state.assignments[d])
        )
        lines.append(f"D\t{doc_id}\t{pairs}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TopicModelState:
    """Rebuild a TopicModelState from save_model output (counts recomputed)."""
    lines = Path(path).read_text("utf-8").splitlines()
    if not lines or lines[0] != f"#{MODEL_FORMAT}":
        raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
    header: dict[str, str] = {}
    vocab: list[str] = []
    doc_ids: list[str] = []
    doc_tokens: list[list[int]] = []
    assignments: list[list[int]] = []
    for line in lines[1:]:
        if line.startswith("#"):
            key, value = line[1:].split("\t", 1)
            header[key] = value
        elif line.startswith("V\t"):
            vocab.append(line.split("\t", 1)[1])
        elif line.startswith("D\t"):
            _, doc_id, pairs = line.split("\t", 2)
            ws, zs = [], []
            for pair in pairs.split():
                w, z = pair.split(":")
                ws.append(int(w))
                zs.append(int(z))
            doc_ids.append(doc_id)
            doc_tokens.append(ws)
            assignments.append(zs)
        elif line.strip():
            raise ValueError(f"bad model line: {line!r}")

    k = int(header["k"])
    doc_topic = np.zeros((len(doc_ids), k), dtype=np.int64)
    topic_word = np.zeros((k, len(vocab)), dtype=np.int64)
    topic_total = np.zeros(k, dtype=np.int64)
    for d, (ws, zs) in enumerate(zip(doc_tokens, assignments)):
        for w, z in zip(ws, zs):
            doc_topic[d, z] += 1
            topic_word[z, w] += 1
            topic_total[z] += 1
    state = TopicModelState(
        k=k,
        vocab=tuple(vocab),
        doc_ids=tuple(doc_ids),
        doc_tokens=doc_tokens,
        assignments=assignments,
        doc_topic_counts=doc_topic,
        topic_word_counts=topic_word,
        topic_totals=topic_total,
        alpha_hyper=float(header["alpha"]),
        beta_hyper=float(header["beta"]),
        rng_seed=int(header["seed"]),
        iterations=int(header["iterations"]),
    )
    check_count_invariants(state)
    return state
