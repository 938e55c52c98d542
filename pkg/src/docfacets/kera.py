"""Per-document keyword extraction and tag-cloud aggregation.

Keywords are mined from a single document with no corpus statistics: adjacent
word pairs are scored as collocations (log-likelihood ratio by default, PMI as
an alternative), filtered to noun phrases, joined by proper-noun unigrams, and
ranked by the harmonic mean of a strength score (alpha) and a position score
(beta).  Natural log throughout; the log base only rescales LLR monotonically.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from . import textproc
from .textproc import NUMBER, STOPWORD, Phrase, Token

BIGRAM = "BIGRAM"
PROPER_UNIGRAM = "PROPER_UNIGRAM"

LLR = "llr"
PMI = "pmi"


@dataclass(frozen=True)
class ContingencyTable:
    """Observed bigram-slot frequencies for a word pair (w1, w2).

    n11 counts slots holding exactly (w1, w2); n12 slots with w1 first and a
    different second word; n21 the converse; n22 everything else.
    """

    n11: int
    n12: int
    n21: int
    n22: int

    @property
    def total(self) -> int:
        return self.n11 + self.n12 + self.n21 + self.n22


@dataclass(frozen=True)
class KeywordCandidate:
    phrase: Phrase
    kind: str
    alpha: float
    beta: float
    score: float = field(default=0.0)

    @property
    def text(self) -> str:
        return self.phrase.text


@dataclass(frozen=True)
class KeraOptions:
    """Knobs for extract_keywords.

    The three ``_variation`` style flags correspond to optional pruning
    variations (drop unigrams embedded in chosen bigrams, drop unigrams first
    seen late in the document, always use frequency for alpha); all are off
    by default.
    """

    method: str = LLR
    min_count: int = 2
    prune_upper_case: bool = False
    drop_embedded_unigrams: bool = False
    late_unigram_cutoff: float | None = None
    alpha_always_frequency: bool = False


DEFAULT_OPTIONS = KeraOptions()


def harmonic_mean(alpha: float, beta: float) -> float:
    if alpha + beta <= 0.0:
        return 0.0
    return 2.0 * alpha * beta / (alpha + beta)


def llr_score(table: ContingencyTable) -> float:
    """Log-likelihood ratio 2 * sum n_ij * ln(n_ij / m_ij).

    Expected counts m_ij come from the table margins under independence;
    0 * ln(0/...) is taken as 0.  Independence gives exactly 0.
    """
    n = float(table.total)
    if n <= 0:
        raise ValueError("empty table")
    rows = (table.n11 + table.n12, table.n21 + table.n22)
    cols = (table.n11 + table.n21, table.n12 + table.n22)
    cells = ((table.n11, 0, 0), (table.n12, 0, 1), (table.n21, 1, 0), (table.n22, 1, 1))
    acc = 0.0
    for obs, r, c in cells:
        if obs == 0:
            continue
        expected = rows[r] * cols[c] / n
        acc += obs * math.log(obs / expected)
    return max(2.0 * acc, 0.0)


def pmi_score(table: ContingencyTable) -> float:
    """Pointwise mutual information ln(p(w1 w2) / (p(w1 .) p(. w2)))."""
    if table.n11 < 1:
        raise ValueError("unobserved pair")
    n = float(table.total)
    p_joint = table.n11 / n
    p_first = (table.n11 + table.n12) / n
    p_second = (table.n11 + table.n21) / n
    return math.log(p_joint / (p_first * p_second))


def _adjacent_pairs(tokens: list[Token]) -> list[tuple[str, str]]:
    """Within-sentence adjacent norm pairs; the bigram-slot population."""
    pairs = []
    for a, b in zip(tokens, tokens[1:]):
        if a.sentence_id == b.sentence_id:
            pairs.append((a.norm, b.norm))
    return pairs


def _pair_tables(
    tokens: list[Token], min_count: int
) -> tuple[dict[tuple[str, str], ContingencyTable], dict[tuple[str, str], int]]:
    """Contingency tables for eligible candidate pairs plus first positions.

    Candidates are adjacent in-sentence pairs whose members are neither
    stopwords nor numbers, seen at least ``min_count`` times.  The slot
    population for the margins is every in-sentence adjacent pair.
    """
    eligible: dict[tuple[str, str], int] = {}
    population = _adjacent_pairs(tokens)
    pair_counts = Counter(population)
    first_counts: Counter[str] = Counter(p[0] for p in population)
    second_counts: Counter[str] = Counter(p[1] for p in population)
    total = len(population)

    for a, b in zip(tokens, tokens[1:]):
        if a.sentence_id != b.sentence_id:
            continue
        if a.pos in (STOPWORD, NUMBER) or b.pos in (STOPWORD, NUMBER):
            continue
        key = (a.norm, b.norm)
        if key not in eligible:
            eligible[key] = a.index

    tables: dict[tuple[str, str], ContingencyTable] = {}
    first_index: dict[tuple[str, str], int] = {}
    for key, first in eligible.items():
        n11 = pair_counts[key]
        if n11 < min_count:
            continue
        n12 = first_counts[key[0]] - n11
        n21 = second_counts[key[1]] - n11
        n22 = total - n11 - n12 - n21
        tables[key] = ContingencyTable(n11=n11, n12=n12, n21=n21, n22=n22)
        first_index[key] = first
    return tables, first_index


def _scored_pairs(
    tokens: list[Token], method: str, min_count: int
) -> tuple[
    dict[tuple[str, str], float],
    dict[tuple[str, str], int],
    dict[tuple[str, str], int],
]:
    """(scores, pair counts, first positions) for eligible bigrams."""
    if method not in (LLR, PMI):
        raise ValueError(f"unknown collocation method {method!r}")
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if len(tokens) < 2:
        return {}, {}, {}
    tables, first_index = _pair_tables(tokens, min_count)
    scorer = llr_score if method == LLR else pmi_score
    scores = {pair: scorer(t) for pair, t in tables.items()}
    counts = {pair: t.n11 for pair, t in tables.items()}
    return scores, counts, first_index


def extract_collocations(
    tokens: list[Token], method: str = LLR, min_count: int = 2
) -> dict[tuple[str, str], float]:
    """Score candidate bigrams against the document's adjacent-pair slots."""
    scores, _, _ = _scored_pairs(tokens, method, min_count)
    return scores


def _first_norm_index(tokens: list[Token]) -> dict[str, int]:
    first: dict[str, int] = {}
    for tok in tokens:
        if tok.norm not in first:
            first[tok.norm] = tok.index
    return first


def extract_keywords_from_tokens(
    tokens: list[Token], k: int = 10, options: KeraOptions = DEFAULT_OPTIONS
) -> list[KeywordCandidate]:
    """Rank keyword candidates for one tagged document.

    Candidates are (collocations intersect noun phrases) union proper-noun
    unigrams.  Strength alpha is term frequency over the max frequency among
    candidates' member words for unigrams, and collocation score over the max
    candidate collocation score for bigrams.  Position beta is
    1 - first_occurrence / word_count, with the first occurrence read off the
    token stream itself (adjacent in-sentence pair for bigrams).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not tokens:
        return []
    word_count = len(tokens)
    colloc, pair_count, pair_first = _scored_pairs(
        tokens, options.method, options.min_count
    )
    noun_pairs = {p.words for p in textproc.extract_noun_phrases(tokens)}
    proper = textproc.extract_proper_noun_unigrams(
        tokens, upper_case_only=options.prune_upper_case
    )

    norm_first = _first_norm_index(tokens)
    freq = Counter(t.norm for t in tokens)

    bigrams = [pair for pair in colloc if pair in noun_pairs]
    unigrams = sorted(p.words[0] for p in proper)

    if options.drop_embedded_unigrams:
        covered = {w for pair in bigrams for w in pair}
        unigrams = [u for u in unigrams if u not in covered]
    if options.late_unigram_cutoff is not None:
        cut = options.late_unigram_cutoff
        unigrams = [u for u in unigrams if norm_first[u] / word_count <= cut]

    member_words = {w for pair in bigrams for w in pair} | set(unigrams)
    max_freq = max((freq[w] for w in member_words), default=0)
    max_colloc = max((colloc[pair] for pair in bigrams), default=0.0)

    candidates: list[KeywordCandidate] = []
    for pair in bigrams:
        if options.alpha_always_frequency:
            alpha = pair_count[pair] / max_freq if max_freq else 0.0
        else:
            # PMI can go negative; negative evidence contributes no strength.
            alpha = max(colloc[pair], 0.0) / max_colloc if max_colloc > 0.0 else 0.0
        beta = 1.0 - pair_first[pair] / word_count
        candidates.append(
            KeywordCandidate(
                phrase=Phrase(words=pair, first_index=pair_first[pair]),
                kind=BIGRAM,
                alpha=alpha,
                beta=beta,
                score=harmonic_mean(alpha, beta),
            )
        )
    for word in unigrams:
        alpha = freq[word] / max_freq if max_freq else 0.0
        beta = 1.0 - norm_first[word] / word_count
        candidates.append(
            KeywordCandidate(
                phrase=Phrase(words=(word,), first_index=norm_first[word]),
                kind=PROPER_UNIGRAM,
                alpha=alpha,
                beta=beta,
                score=harmonic_mean(alpha, beta),
            )
        )

    candidates.sort(key=lambda c: (-c.score, c.phrase.first_index, c.text))
    return candidates[:k]


def extract_keywords(
    doc, k: int = 10, options: KeraOptions = DEFAULT_OPTIONS
) -> list[KeywordCandidate]:
    """extract_keywords_from_tokens over a Document or raw text."""
    text = doc if isinstance(doc, str) else doc.text
    return extract_keywords_from_tokens(textproc.analyze(text), k, options)


def build_tag_cloud(docs) -> list[tuple[str, int]]:
    """Aggregate per-document keyword lists into (tag, document count) pairs.

    ``docs`` yields (doc_id, keywords) where keywords are strings, Phrases or
    KeywordCandidates.  A tag counts each document at most once; the cloud is
    sorted by count descending, then tag ascending.
    """
    tag_docs: dict[str, set[str]] = {}
    for doc_id, keywords in docs:
        for kw in keywords:
            tag = kw if isinstance(kw, str) else kw.text
            tag_docs.setdefault(tag, set()).add(doc_id)
    cloud = [(tag, len(ids)) for tag, ids in tag_docs.items()]
    cloud.sort(key=lambda item: (-item[1], item[0]))
    return cloud
