import collections

import numpy as np
import pytest

from docfacets import textproc, topics
from docfacets.topics import (
    TopicModelState,
    assign_topics,
    check_count_invariants,
    choose_k,
    fit_lda,
    label_cluster_with_kera,
    load_model,
    prepare_corpus,
    rank_topics,
    save_model,
    topic_tags,
)
from util import two_topic_corpus


def state_with_counts(doc_counts, alpha=0.0, vocab_size=4):
    """Hand-built state for testing the assignment/ranking math."""
    k = len(doc_counts[0])
    doc_ids = tuple(f"d{i}" for i in range(len(doc_counts)))
    doc_tokens = [[0] * int(sum(row)) for row in doc_counts]
    topic_word = np.zeros((k, vocab_size), dtype=np.int64)
    totals = np.zeros(k, dtype=np.int64)
    for row in doc_counts:
        for t, c in enumerate(row):
            topic_word[t, 0] += c
            totals[t] += c
    return TopicModelState(
        k=k,
        vocab=tuple(f"w{i}" for i in range(vocab_size)),
        doc_ids=doc_ids,
        doc_tokens=doc_tokens,
        assignments=[[0] * len(toks) for toks in doc_tokens],
        doc_topic_counts=np.array(doc_counts, dtype=np.int64),
        topic_word_counts=topic_word,
        topic_totals=totals,
        alpha_hyper=alpha,
        beta_hyper=0.01,
        rng_seed=0,
        iterations=1,
    )


def recovery_mapping(state, labels):
    """generating label -> fitted topic via argmax majority."""
    votes = {lab: collections.Counter() for lab in set(labels.values())}
    for doc_id, lab in labels.items():
        props = state.proportions(state.doc_index(doc_id))
        votes[lab][int(props.argmax())] += 1
    return {lab: counter.most_common(1)[0][0] for lab, counter in votes.items()}


class TestPrepareCorpus:
    def test_drops_stopwords_numbers_and_rare_words(self):
        tagged = {
            "d1": textproc.analyze("the quick network of 42 nodes"),
            "d2": textproc.analyze("the network has nodes everywhere"),
        }
        corpus = prepare_corpus(tagged, min_doc_freq=2)
        assert set(corpus) == {"d1", "d2"}
        assert set(corpus["d1"]) == {"network", "nodes"}

    def test_empty_documents_dropped(self):
        tagged = {
            "d1": textproc.analyze("network graph network graph"),
            "d2": textproc.analyze("the of and"),
        }
        corpus = prepare_corpus(tagged, min_doc_freq=1)
        assert "d2" not in corpus


class TestFitLDA:
    def test_count_conservation_single_doc(self):
        state = fit_lda({"d": ["a", "b", "a", "c"] * 3}, k=2, iterations=5, seed=0)
        check_count_invariants(state)
        assert int(state.doc_topic_counts[0].sum()) == 12

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty corpus"):
            fit_lda({}, k=2)

    def test_k_above_token_count_rejected(self):
        with pytest.raises(ValueError, match="exceeds total token"):
            fit_lda({"d": ["a", "b"]}, k=3)

    def test_empty_document_rejected(self):
        with pytest.raises(ValueError, match="no usable tokens"):
            fit_lda({"d": []}, k=2)

    def test_k_below_two_rejected(self):
        with pytest.raises(ValueError):
            fit_lda({"d": ["a", "b"]}, k=1)

    def test_deterministic_given_seed(self):
        docs, _ = two_topic_corpus(n_docs=20, doc_len=20)
        s1 = fit_lda(docs, k=2, iterations=20, seed=11)
        s2 = fit_lda(docs, k=2, iterations=20, seed=11)
        assert s1.assignments == s2.assignments
        assert np.array_equal(s1.doc_topic_counts, s2.doc_topic_counts)

    def test_synthetic_two_topic_recovery(self):
        docs, labels = two_topic_corpus()
        state = fit_lda(docs, k=2, iterations=200, seed=0, check_invariants=True)
        mapping = recovery_mapping(state, labels)
        assign = assign_topics(state, threshold=0.3)
        hits = sum(1 for d, lab in labels.items() if mapping[lab] in assign[d])
        assert hits >= 95

    def test_recovery_holds_across_seeds(self):
        docs, labels = two_topic_corpus()
        for seed in range(10):
            state = fit_lda(docs, k=2, iterations=200, seed=seed)
            mapping = recovery_mapping(state, labels)
            assign = assign_topics(state, threshold=0.3)
            hits = sum(1 for d, lab in labels.items() if mapping[lab] in assign[d])
            assert hits >= 95, f"seed {seed}: only {hits} recovered"

    def test_proportions_sum_to_one(self):
        docs, _ = two_topic_corpus(n_docs=10, doc_len=15)
        state = fit_lda(docs, k=3, iterations=10, seed=1)
        for d in range(len(state.doc_ids)):
            assert abs(float(state.proportions(d).sum()) - 1.0) < 1e-12


class TestAssignTopics:
    def test_both_above_threshold(self):
        state = state_with_counts([[6, 4]])
        assert assign_topics(state, 0.3) == {"d0": {0, 1}}

    def test_one_below(self):
        state = state_with_counts([[29, 71]])
        assert assign_topics(state, 0.3) == {"d0": {1}}

    def test_uniform_below_threshold_is_empty(self):
        state = state_with_counts([[25, 25, 25, 25]])
        assert assign_topics(state, 0.3) == {"d0": set()}

    def test_exactly_threshold_excluded(self):
        state = state_with_counts([[3, 7]])
        assert assign_topics(state, 0.3) == {"d0": {1}}  # 0.3 is not > 0.3


class TestTopicTags:
    def make_state(self):
        state = state_with_counts([[5, 5]], vocab_size=4)
        state.topic_word_counts = np.array([[9, 1, 0, 0], [0, 0, 5, 5]])
        state.topic_totals = np.array([10, 10])
        return state

    def test_most_probable_words_first(self):
        state = self.make_state()
        assert topic_tags(state, 0, n=2) == ["w0", "w1"]

    def test_single_tag(self):
        assert topic_tags(self.make_state(), 0, n=1) == ["w0"]

    def test_tie_breaks_by_word_id(self):
        assert topic_tags(self.make_state(), 1, n=2) == ["w2", "w3"]

    def test_invalid_topic(self):
        with pytest.raises(ValueError, match="invalid topic"):
            topic_tags(self.make_state(), 9)

    def test_planted_topic_words_dominate(self):
        docs, labels = two_topic_corpus(n_docs=30, doc_len=30)
        state = fit_lda(docs, k=2, iterations=100, seed=3)
        mapping = recovery_mapping(state, labels)
        tags_a = topic_tags(state, mapping[0], n=10)
        assert all(w.startswith("alpha") for w in tags_a)


class TestRankTopics:
    def test_ordered_by_assigned_docs(self):
        state = state_with_counts([[10, 0]] * 5 + [[0, 10]] * 9)
        assignment = assign_topics(state, 0.3)
        assert rank_topics(state, assignment) == [1, 0]

    def test_tie_by_topic_id(self):
        state = state_with_counts([[10, 0], [0, 10], [0, 10], [10, 0]])
        assignment = assign_topics(state, 0.3)
        assert rank_topics(state, assignment) == [0, 1]

    def test_unassigned_topic_ranks_last(self):
        state = state_with_counts([[10, 0, 0], [10, 0, 0], [0, 10, 0]])
        assignment = assign_topics(state, 0.3)
        assert rank_topics(state, assignment) == [0, 1, 2]


class TestChooseK:
    @pytest.mark.parametrize("size,expected", [(1, 5), (1000, 14), (100_000, 50)])
    def test_examples(self, size, expected):
        assert choose_k(size) == expected

    def test_invalid(self):
        with pytest.raises(ValueError):
            choose_k(0)


class TestClusterLabeling:
    def test_single_document_cluster(self):
        text = ". ".join(["Data mining wins again today"] * 3) + "."
        cloud = label_cluster_with_kera([("d1", text)], k_tags=5)
        assert ("data mining", 1) in cloud

    def test_disjoint_docs_union(self):
        t1 = ". ".join(["Data mining wins again"] * 3) + "."
        t2 = ". ".join(["Neural networks win again"] * 3) + "."
        cloud = dict(label_cluster_with_kera([("d1", t1), ("d2", t2)], k_tags=10))
        assert cloud["data mining"] == 1
        assert cloud["neural networks"] == 1

    def test_shared_bigram_counts_cluster_wide(self):
        text = ". ".join(["Data mining wins again today"] * 3) + "."
        cloud = label_cluster_with_kera([(f"d{i}", text) for i in range(4)], k_tags=3)
        assert cloud[0] == ("data mining", 4)

    def test_empty_cluster_rejected(self):
        with pytest.raises(ValueError, match="empty cluster"):
            label_cluster_with_kera([])


class TestPersistence:
    def test_roundtrip(self, tmp_path):
        docs, _ = two_topic_corpus(n_docs=12, doc_len=10)
        state = fit_lda(docs, k=2, iterations=15, seed=5)
        path = tmp_path / "model.txt"
        save_model(state, path)
        loaded = load_model(path)
        assert loaded.k == state.k
        assert loaded.vocab == state.vocab
        assert loaded.doc_ids == state.doc_ids
        assert loaded.assignments == state.assignments
        assert np.array_equal(loaded.doc_topic_counts, state.doc_topic_counts)
        assert np.array_equal(loaded.topic_word_counts, state.topic_word_counts)
        assert loaded.rng_seed == state.rng_seed
        assert assign_topics(loaded) == assign_topics(state)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "bogus.txt"
        path.write_text("not a model\n", encoding="utf-8")
        with pytest.raises(ValueError, match="not a docfacets-lda"):
            load_model(path)
