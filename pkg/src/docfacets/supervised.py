"""Binary linear classifiers, active-learning sampling, and term mining.

Documents are represented as L2-normalized binary word-presence vectors over
a fixed vocabulary.  The SVM is trained with seeded-shuffle stochastic
subgradient descent on the hinge loss, which keeps every fit deterministic
and dependency-free.  The same labeled sets feed entropy/information-gain
mining of discriminative terms.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import textproc

REPORT_TYPES = ("TECHNICAL", "TEST", "PROGRAMMATIC", "OTHER")
OTHER_TAG = "other"
MODEL_FORMAT = "docfacets-model v1"


class Vocabulary:
    """Stable word <-> id mapping shared by a set of feature vectors."""

    def __init__(self, words: Iterable[str]):
        self.words: tuple[str, ...] = tuple(sorted(set(words)))
        self.index: dict[str, int] = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_presence(cls, presence: Mapping[str, Iterable[str]]) -> "Vocabulary":
        return cls(w for words in presence.values() for w in words)


def document_terms(text: str) -> set[str]:
    """Distinct non-stopword, non-number norms of a text."""
    return {
        t.norm
        for t in textproc.analyze(text)
        if t.pos not in (textproc.STOPWORD, textproc.NUMBER)
    }


def feature_vector(words: Iterable[str], vocab: Vocabulary) -> dict[int, float]:
    """Sparse binary-presence vector, L2-normalized (unit norm when non-empty)."""
    ids = sorted({vocab.index[w] for w in words if w in vocab.index})
    if not ids:
        return {}
    weight = 1.0 / math.sqrt(len(ids))
    return {i: weight for i in ids}


@dataclass(frozen=True)
class LabeledSet:
    """Disjoint positive/negative document ids with class proportions."""

    positives: frozenset[str]
    negatives: frozenset[str]

    def __post_init__(self):
        overlap = self.positives & self.negatives
        if overlap:
            raise ValueError(f"documents labeled both ways: {sorted(overlap)[:3]}")

    @classmethod
    def of(cls, positives: Iterable[str], negatives: Iterable[str]) -> "LabeledSet":
        return cls(frozenset(positives), frozenset(negatives))

    def __len__(self) -> int:
        return len(self.positives) + len(self.negatives)

    @property
    def p_plus(self) -> float:
        return len(self.positives) / len(self)

    @property
    def p_minus(self) -> float:
        return len(self.negatives) / len(self)


@dataclass
class LinearModel:
    """A trained binary classifier for one tag."""

    label: str
    vocab: Vocabulary
    weights: np.ndarray
    bias: float
    training_manifest: tuple[str, ...] = ()
    train_accuracy: float = float("nan")

    def margin(self, features: Mapping[int, float]) -> float:
        """w.x + b for a feature vector built against this model's vocab."""
        w = self.weights
        return float(sum(w[i] * x for i, x in features.items()) + self.bias)

    def margin_of(self, words: Iterable[str]) -> float:
        """Margin computed directly from a document's word set."""
        return self.margin(feature_vector(words, self.vocab))


def train_linear_svm(
    train: LabeledSet,
    presence: Mapping[str, Iterable[str]],
    vocab: Vocabulary,
    label: str = "positive",
    *,
    epochs: int = 60,
    lam: float = 1e-4,
    seed: int = 0,
) -> LinearModel:
    """Hinge-loss SGD (Pegasos-style schedule) with a deterministic shuffle.

    The bias is left unregularized.  Training accuracy is computed on the
    training set itself and recorded on the model; contradictory inputs
    (identical feature vectors in both classes) trigger a warning so a
    degenerate fit is never silent.
    """
    if not train.positives or not train.negatives:
        raise ValueError("degenerate training set: both classes must be non-empty")

    vectors = {
        d: feature_vector(presence[d], vocab)
        for d in train.positives | train.negatives
    }
    pos_sig = {tuple(sorted(vectors[d].items())) for d in train.positives}
    neg_sig = {tuple(sorted(vectors[d].items())) for d in train.negatives}
    if pos_sig & neg_sig:
        warnings.warn(
            f"{label}: identical feature vectors appear in both classes; "
            "training accuracy cannot reach 1.0",
            stacklevel=2,
        )

    examples = [(d, vectors[d], 1.0) for d in sorted(train.positives)]
    examples += [(d, vectors[d], -1.0) for d in sorted(train.negatives)]
    w = np.zeros(len(vocab))
    b = 0.0
    rng = random.Random(seed)
    t = 0
    order = list(range(len(examples)))
    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            _, x, y = examples[i]
            eta = 1.0 / (lam * t)
            m = sum(w[j] * v for j, v in x.items()) + b
            w *= 1.0 - eta * lam
            if y * m < 1.0:
                for j, v in x.items():
                    w[j] += eta * y * v
                b += eta * y

    model = LinearModel(
        label=label,
        vocab=vocab,
        weights=w,
        bias=b,
        training_manifest=tuple(d for d, _, _ in examples),
    )
    correct = sum(1 for _, x, y in examples if (model.margin(x) > 0) == (y > 0))
    model.train_accuracy = correct / len(examples)
    return model


def predict_tag(models: Sequence[LinearModel], words: Iterable[str]) -> str:
    """Tag of the largest strictly positive margin, else "other"."""
    if not models:
        raise ValueError("no models")
    words = set(words)
    best_tag, best_margin = OTHER_TAG, 0.0
    for model in models:
        m = model.margin_of(words)
        if m > 0.0 and (best_tag == OTHER_TAG or m > best_margin):
            best_tag, best_margin = model.label, m
    return best_tag


def classify_report_type(models: Sequence[LinearModel], words: Iterable[str]) -> str:
    """Argmax margin over the four report-type models; ties by listed order.

    Report-type categorization is exhaustive: OTHER is a class of its own,
    not a fallback, so the argmax applies even when every margin is negative.
    """
    by_label = {m.label: m for m in models}
    missing = [c for c in REPORT_TYPES if c not in by_label]
    if missing:
        raise ValueError(f"missing report-type models: {missing}")
    words = set(words)
    margins = {c: by_label[c].margin_of(words) for c in REPORT_TYPES}
    best = REPORT_TYPES[0]
    for c in REPORT_TYPES[1:]:
        if margins[c] > margins[best]:
            best = c
    return best


def select_informative_negatives(
    model: LinearModel,
    pool: Iterable[str],
    presence: Mapping[str, Iterable[str]],
    n: int,
) -> list[str]:
    """The n pool documents nearest the hyperplane (smallest |margin|).

    Minimum-marginal-hyperplane sampling: the examples the current model is
    least sure about are the most informative negatives to add.  Ties break
    by doc_id.
    """
    pool = list(pool)
    if not pool:
        raise ValueError("empty pool")
    if n > len(pool):
        raise ValueError("n exceeds pool size")
    ranked = sorted(pool, key=lambda d: (abs(model.margin_of(presence[d])), d))
    return ranked[:n]


def balance_training_set(
    pos_ids: Iterable[str], neg_ids: Iterable[str], seed: int = 0
) -> LabeledSet:
    """Subsample the larger class (seeded, uniform) to an exact 1:1 ratio."""
    pos = sorted(pos_ids)
    neg = sorted(neg_ids)
    if not pos or not neg:
        raise ValueError("both classes must be non-empty")
    rng = random.Random(seed)
    if len(pos) > len(neg):
        pos = rng.sample(pos, len(neg))
    elif len(neg) > len(pos):
        neg = rng.sample(neg, len(pos))
    return LabeledSet.of(pos, neg)


def entropy(labeled: LabeledSet) -> float:
    """Impurity H = -p+ log2 p+ - p- log2 p-, with 0 log2 0 = 0."""
    if len(labeled) < 1:
        raise ValueError("empty set")

    def term(p: float) -> float:
        return -p * math.log2(p) if p > 0.0 else 0.0

    return term(labeled.p_plus) + term(labeled.p_minus)


def _subset(pos: frozenset[str], neg: frozenset[str]) -> LabeledSet | None:
    if not pos and not neg:
        return None
    return LabeledSet.of(pos, neg)


def information_gain(
    word: str, labeled: LabeledSet, presence: Mapping[str, set[str]]
) -> float:
    """Expected entropy reduction from splitting on word presence.

    ``presence`` maps doc_id to the set of words the document contains.
    An empty side of the split contributes zero weighted entropy.
    """
    total = len(labeled)
    if total < 1:
        raise ValueError("empty set")
    with_pos = frozenset(d for d in labeled.positives if word in presence.get(d, ()))
    with_neg = frozenset(d for d in labeled.negatives if word in presence.get(d, ()))
    containing = _subset(with_pos, with_neg)
    rest = _subset(labeled.positives - with_pos, labeled.negatives - with_neg)
    gain = entropy(labeled)
    if containing is not None:
        gain -= len(containing) / total * entropy(containing)
    if rest is not None:
        gain -= len(rest) / total * entropy(rest)
    return gain


def top_discriminative_terms(
    labeled: LabeledSet, presence: Mapping[str, set[str]], n: int = 25
) -> list[tuple[str, float]]:
    """The n highest information-gain words in the labeled set.

    Ties break by document frequency (descending), then alphabetically.
    """
    members = labeled.positives | labeled.negatives
    vocab = sorted({w for d in members for w in presence.get(d, ())})
    if not vocab:
        raise ValueError("empty vocabulary")
    doc_freq = {w: sum(1 for d in members if w in presence.get(d, ())) for w in vocab}
    scored = [(w, information_gain(w, labeled, presence)) for w in vocab]
    scored.sort(key=lambda item: (-item[1], -doc_freq[item[0]], item[0]))
    return scored[:n]


@dataclass(frozen=True)
class ActiveLearningConfig:
    """Sizes for the two-step training-set construction.

    Step 0 bootstraps a seed model from the positives plus a random slice of
    the pool; step 1 keeps the pool documents nearest the seed hyperplane;
    step 2 balances classes 1:1 before the final fit.
    """

    seed_negative_factor: int = 4
    informative_factor: int = 2
    epochs: int = 60
    lam: float = 1e-4


def train_with_active_learning(
    label: str,
    pos_ids: Iterable[str],
    pool_ids: Iterable[str],
    presence: Mapping[str, set[str]],
    vocab: Vocabulary,
    seed: int = 0,
    config: ActiveLearningConfig = ActiveLearningConfig(),
) -> LinearModel:
    """Two-step sampling (informative negatives, then balancing) plus final fit."""
    pos = sorted(set(pos_ids))
    pool = sorted(set(pool_ids) - set(pos))
    if not pos or not pool:
        raise ValueError("need positives and a non-empty negative pool")
    rng = random.Random(seed)

    n_seed = min(len(pool), max(config.seed_negative_factor * len(pos), 1))
    seed_negs = rng.sample(pool, n_seed)
    seed_model = train_linear_svm(
        LabeledSet.of(pos, seed_negs), presence, vocab, label,
        epochs=config.epochs, lam=config.lam, seed=seed,
    )

    n_informative = min(len(pool), max(config.informative_factor * len(pos), 1))
    informative = select_informative_negatives(seed_model, pool, presence, n_informative)
    balanced = balance_training_set(pos, informative, seed)
    return train_linear_svm(
        balanced, presence, vocab, label,
        epochs=config.epochs, lam=config.lam, seed=seed,
    )


def save_model(model: LinearModel, path: str | Path) -> None:
    """Versioned text dump: header lines, then one word<TAB>weight row per
    vocabulary word (zero weights included; they matter for normalization)."""
    lines = [f"#{MODEL_FORMAT}"]
    lines.append(f"#label\t{model.label}")
    lines.append(f"#bias\t{model.bias!r}")
    lines.append(f"#train_accuracy\t{model.train_accuracy!r}")
    lines.append(f"#manifest\t{' '.join(model.training_manifest)}")
    for word, weight in zip(model.vocab.words, model.weights):
        lines.append(f"{word}\t{float(weight)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    lines = Path(path).read_text("utf-8").splitlines()
    if not lines or lines[0] != f"#{MODEL_FORMAT}":
        raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
    header: dict[str, str] = {}
    rows: list[tuple[str, float]] = []
    for line in lines[1:]:
        if line.startswith("#"):
            key, value = line[1:].split("\t", 1)
            header[key] = value
        elif line.strip():
            word, weight = line.split("\t")
            rows.append((word, float(weight)))
    vocab = Vocabulary(w for w, _ in rows)
    weights = np.zeros(len(vocab))
    for word, weight in rows:
        weights[vocab.index[word]] = weight
    return LinearModel(
        label=header["label"],
        vocab=vocab,
        weights=weights,
        bias=float(header["bias"]),
        training_manifest=tuple(header.get("manifest", "").split()),
        train_accuracy=float(header.get("train_accuracy", "nan")),
    )
