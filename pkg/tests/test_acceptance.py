"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.
"""

import json
import random
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request

import pytest

from docfacets import kera, supervised, textproc, topics
from docfacets.facetindex import FacetIndex, FacetQuery, brute_force_search
from docfacets.kera import ContingencyTable, extract_collocations, llr_score
from docfacets.supervised import (
    LabeledSet,
    Vocabulary,
    balance_training_set,
    information_gain,
    predict_tag,
    select_informative_negatives,
    top_discriminative_terms,
    train_linear_svm,
)
from test_topics import recovery_mapping
from util import (
    MENTION_SPEC_TEXT,
    PLANTED_BIGRAMS,
    build_fixture_tree,
    build_planted_document,
    ig_oracle,
    llr_oracle,
    separable_presence_corpus,
    synthetic_tagged_corpus,
    two_topic_corpus,
)


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


def test_llr_oracle_equivalence():
    """1,000 random tables match an independent evaluation within 1e-9
    relative; exact-independence tables score exactly 0; under 1 second."""
    rng = random.Random(1234)
    start = time.perf_counter()
    for _ in range(1000):
        n11, n12, n21, n22 = (rng.randint(0, 80) for _ in range(4))
        if n11 + n12 + n21 + n22 == 0:
            n22 = 1
        got = llr_score(ContingencyTable(n11, n12, n21, n22))
        want = llr_oracle(n11, n12, n21, n22)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-9)
    for _ in range(100):
        u1, u2, v1, v2 = (rng.randint(1, 40) for _ in range(4))
        assert llr_score(ContingencyTable(u1 * v1, u1 * v2, u2 * v1, u2 * v2)) == 0.0
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"LLR suite took {elapsed:.2f}s"
    ok(f"LLR oracle equivalence (1e-9 rel, {elapsed*1000:.0f} ms)")


def test_kera_algorithm_conformance():
    """Planted 500-word fixture: top-5 equals the planted set, candidates
    obey the (collocations AND noun phrases) OR proper-unigrams algebra, and
    every rank score is the harmonic mean to 1e-12."""
    text = build_planted_document(total_words=500)
    tokens = textproc.analyze(text)
    assert len(tokens) == 500

    ranked = kera.extract_keywords_from_tokens(tokens, k=5)
    assert {c.text for c in ranked} == {" ".join(p) for p in PLANTED_BIGRAMS}

    everything = kera.extract_keywords_from_tokens(tokens, k=10_000)
    colloc = set(extract_collocations(tokens, kera.LLR, 2))
    noun = {p.words for p in textproc.extract_noun_phrases(tokens)}
    proper = {p.words for p in textproc.extract_proper_noun_unigrams(tokens)}
    assert {c.phrase.words for c in everything} == (colloc & noun) | proper

    for c in everything:
        expected = 2 * c.alpha * c.beta / (c.alpha + c.beta) if c.alpha + c.beta else 0.0
        assert c.score == pytest.approx(expected, rel=1e-12, abs=1e-15)
    ok("KERA Algorithm-1 conformance (planted top-5, set algebra, harmonic scores)")


def test_information_gain_oracle_equivalence():
    """Random labeled sets of <= 12 docs match brute force within 1e-9;
    label-swap symmetry is exact; a planted discriminator ranks first."""
    rng = random.Random(555)
    vocab = [f"w{i}" for i in range(10)]
    for _ in range(400):
        n = rng.randint(2, 12)
        ids = [f"d{i}" for i in range(n)]
        presence = {d: set(rng.sample(vocab, rng.randint(0, 6))) for d in ids}
        n_pos = rng.randint(1, n - 1)
        labeled = LabeledSet.of(ids[:n_pos], ids[n_pos:])
        swapped = LabeledSet.of(ids[n_pos:], ids[:n_pos])
        for w in vocab:
            got = information_gain(w, labeled, presence)
            want = ig_oracle(
                w,
                {d: presence[d] for d in labeled.positives},
                {d: presence[d] for d in labeled.negatives},
            )
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)
            assert got == information_gain(w, swapped, presence)

    presence = {f"p{i}": {"beacon", f"f{i}"} for i in range(6)}
    presence.update({f"n{i}": {f"f{i}"} for i in range(6)})
    labeled = LabeledSet.of({f"p{i}" for i in range(6)}, {f"n{i}" for i in range(6)})
    ranked = top_discriminative_terms(labeled, presence, n=25)
    assert ranked[0][0] == "beacon"
    ok("information gain oracle equivalence (1e-9, symmetry exact, planted rank 1)")


def test_lda_synthetic_recovery():
    """2 disjoint 20-word topics, 100 docs x 50 tokens, 200 sweeps: >= 95%
    of documents get a > 0.3 assignment matching their generating topic;
    count conservation holds after every sweep; under 30 seconds."""
    docs, labels = two_topic_corpus(n_docs=100, doc_len=50, vocab_size=20)
    start = time.perf_counter()
    state = topics.fit_lda(docs, k=2, iterations=200, seed=0, check_invariants=True)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"LDA fit took {elapsed:.1f}s"
    topics.check_count_invariants(state)
    mapping = recovery_mapping(state, labels)
    assignment = topics.assign_topics(state, threshold=0.3)
    hits = sum(1 for d, lab in labels.items() if mapping[lab] in assignment[d])
    assert hits >= 95, f"only {hits}/100 documents recovered"
    ok(f"LDA synthetic recovery ({hits}/100 docs, {elapsed:.1f}s)")


def test_classifier_pipeline():
    """Separable 200-doc corpus: held-out accuracy >= 0.95; informative
    negatives equal the full-sort oracle; balancing is exactly 1:1;
    all-negative margins yield the tag "other"."""
    presence, labels = separable_presence_corpus(n_docs=200, seed=42)
    ids = sorted(presence)
    train_ids, test_ids = ids[:160], ids[160:]
    vocab = Vocabulary.from_presence(presence)
    train = LabeledSet.of(
        {d for d in train_ids if labels[d]}, {d for d in train_ids if not labels[d]}
    )
    model = train_linear_svm(train, presence, vocab, label="tech-x", seed=7)
    correct = sum(1 for d in test_ids if (model.margin_of(presence[d]) > 0) == labels[d])
    accuracy = correct / len(test_ids)
    assert accuracy >= 0.95

    pool = sorted(test_ids)
    for n in (1, 5, len(pool)):
        got = select_informative_negatives(model, pool, presence, n)
        want = sorted(pool, key=lambda d: (abs(model.margin_of(presence[d])), d))[:n]
        assert got == want

    balanced = balance_training_set([f"p{i}" for i in range(51)],
                                    [f"n{i}" for i in range(5000)], seed=3)
    assert len(balanced.positives) == len(balanced.negatives) == 51

    import numpy as np

    neg_models = [
        supervised.LinearModel(
            label=f"m{i}", vocab=vocab, weights=np.zeros(len(vocab)), bias=-1.0
        )
        for i in range(3)
    ]
    assert predict_tag(neg_models, presence[ids[0]]) == "other"
    ok(f"classifier pipeline (held-out accuracy {accuracy:.3f}, oracle selection, 1:1 balance)")


def test_faceted_search_equivalence():
    """1,000 synthetic docs, 200 randomized (text, filter, date) queries:
    results and every facet count identical to a brute-force linear scan;
    adding a filter never enlarges the result set."""
    from datetime import datetime, timedelta, timezone

    rows = synthetic_tagged_corpus(n_docs=1000, seed=4242)
    index = FacetIndex()
    for doc, tags in rows:
        index.index_document(doc, tags)

    rng = random.Random(777)
    pools = {
        "keywords": [f"kw phrase{i}" for i in range(12)],
        "technology": ["tech-a", "tech-b", "tech-c", "other"],
        "mentions": ["PII", "FOUO", "IPADDR"],
        "folder": ["/", "a", "a/b", "c"],
        "file_type": ["txt", "html", "md", "log"],
        "report_type": ["TECHNICAL", "TEST", "PROGRAMMATIC", "OTHER"],
    }

    def random_query():
        kwargs = {}
        if rng.random() < 0.6:
            kwargs["text_terms"] = tuple(
                f"term{rng.randint(0, 39):02d}" for _ in range(rng.randint(1, 3))
            )
        filters = {}
        for facet in rng.sample(sorted(pools), rng.randint(0, 2)):
            filters[facet] = frozenset(rng.sample(pools[facet], rng.randint(1, 2)))
        if rng.random() < 0.3:
            start = datetime(2013, 1, 1, tzinfo=timezone.utc) + timedelta(
                days=rng.randint(0, 300)
            )
            kwargs["date_from"] = start
            kwargs["date_to"] = start + timedelta(days=rng.randint(1, 150))
        return FacetQuery(filters=filters, **kwargs)

    for _ in range(200):
        query = random_query()
        fast = index.search(query)
        slow = brute_force_search(rows, query)
        assert fast.doc_ids == slow.doc_ids
        assert fast.facet_counts == slow.facet_counts

        extra = dict(query.filters)
        facet = rng.choice(sorted(set(pools) - set(extra)) or ["technology"])
        extra[facet] = frozenset(rng.sample(pools[facet], 1))
        narrowed = index.search(
            FacetQuery(
                text_terms=query.text_terms,
                filters=extra,
                date_from=query.date_from,
                date_to=query.date_to,
            )
        )
        assert set(narrowed.doc_ids) <= set(fast.doc_ids)
    ok("faceted search equivalence (200 randomized queries vs linear scan)")


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def _cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "docfacets", *args],
        cwd=cwd, capture_output=True, text=True, timeout=120,
    )


def test_end_to_end_cli(tmp_path):
    """ingest -> extract -> topics -> mentions -> index -> query over a
    64-file tree in under 60 seconds; empty query totals 64; the PII regex
    tags exactly the planted SSN files; CLI and HTTP agree byte-for-byte."""
    tree = tmp_path / "tree"
    tree.mkdir()
    ssn_files, all_files = build_fixture_tree(tree, n_files=64)
    assert len(all_files) == 64
    store = str(tmp_path / "store")
    spec = tmp_path / "mentions.tsv"
    spec.write_text(MENTION_SPEC_TEXT, encoding="utf-8")

    start = time.perf_counter()
    for args in (
        ["ingest", str(tree), "--store", store],
        ["extract", "--store", store, "--k", "5"],
        ["topics", "--store", store, "--iterations", "50", "--seed", "1"],
        ["mentions", str(spec), "--store", store],
        ["index", "--store", store],
    ):
        proc = _cli(args, tmp_path)
        assert proc.returncode == 0, f"{args}: {proc.stderr}"

    proc = _cli(["query", "", "--store", store], tmp_path)
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"pipeline took {elapsed:.1f}s"
    assert payload["total"] == 64

    proc = _cli(["query", "f.mentions=PII", "--store", store], tmp_path)
    pii = json.loads(proc.stdout)
    got = {doc["path"].split("tree/")[-1] for doc in pii["docs"]}
    assert got == set(ssn_files)

    port = _free_port()
    server = subprocess.Popen(
        [sys.executable, "-m", "docfacets", "serve", "--store", store,
         "--port", str(port)],
        cwd=tmp_path, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    try:
        deadline = time.time() + 15
        while True:
            try:
                with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/health", timeout=1
                ) as resp:
                    assert json.loads(resp.read())["documents"] == 64
                    break
            except (urllib.error.URLError, ConnectionError):
                if time.time() > deadline:
                    raise AssertionError("service did not come up")
                time.sleep(0.1)

        for expr, qs in (("", ""), ("f.mentions=PII", "?f.mentions=PII"),
                         ("mining", "?q=mining")):
            proc = _cli(["query", expr, "--store", store], tmp_path)
            with urllib.request.urlopen(
                f"http://127.0.0.1:{port}/search{qs}", timeout=5
            ) as resp:
                http_bytes = resp.read().strip()
            assert proc.stdout.strip().encode("utf-8") == http_bytes
    finally:
        server.terminate()
        server.wait(timeout=10)
    ok(f"end-to-end CLI ({elapsed:.1f}s for 64 docs; CLI == HTTP byte-for-byte)")
