"""Tokenization, rule-based part-of-speech tagging and phrase extraction.

The tagger is intentionally lightweight: a shipped lexicon of common English
words plus a handful of suffix and capitalization heuristics.  Unknown words
default to NOUN, which biases the noun-phrase filter toward recall -- most
unseen technical vocabulary is nominal.  Everything here is deterministic, so
downstream ranking and tests are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

NOUN = "NOUN"
PROPER_NOUN = "PROPER_NOUN"
ADJECTIVE = "ADJECTIVE"
VERB = "VERB"
STOPWORD = "STOPWORD"
NUMBER = "NUMBER"
OTHER = "OTHER"

POS_TAGS = frozenset({NOUN, PROPER_NOUN, ADJECTIVE, VERB, STOPWORD, NUMBER, OTHER})

# Maximal runs of letters/digits with internal hyphens or apostrophes.
# Underscores and all other punctuation terminate a word.
_WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*", re.UNICODE)

# Sentence boundary: terminal punctuation followed by whitespace and an
# upper-case letter, or a blank line.
_BOUNDARY_RE = re.compile(r"[.!?]+(?=[)\"'”\]]*\s+[A-Z])|\n[ \t]*\n")

_ADJ_SUFFIXES = ("ous", "ful", "ive", "al")


@dataclass(frozen=True)
class Token:
    """One word in a document, with its position and part of speech."""

    surface: str
    norm: str
    index: int
    sentence_id: int
    pos: str = OTHER
    sentence_start: bool = False


@dataclass(frozen=True)
class Phrase:
    """A unigram or bigram keyword unit keyed by normalized words."""

    words: tuple[str, ...]
    first_index: int

    @property
    def text(self) -> str:
        return " ".join(self.words)


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    data = resources.files("docfacets.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.split() if w)


@lru_cache(maxsize=1)
def lexicon() -> dict[str, str]:
    data = resources.files("docfacets.data").joinpath("lexicon.tsv").read_text("utf-8")
    table: dict[str, str] = {}
    for line in data.splitlines():
        if not line.strip():
            continue
        word, tag = line.split("\t")
        if tag not in POS_TAGS:
            raise ValueError(f"bad lexicon tag {tag!r} for {word!r}")
        table[word] = tag
    return table


def tokenize(text: str) -> list[Token]:
    """Split text into positioned tokens with sentence ids (POS unset)."""
    if not text:
        return []
    boundaries = [m.end() for m in _BOUNDARY_RE.finditer(text)]
    tokens: list[Token] = []
    sent = 0
    b = 0
    prev_sent = -1
    for i, m in enumerate(_WORD_RE.finditer(text)):
        while b < len(boundaries) and boundaries[b] <= m.start():
            sent += 1
            b += 1
        tokens.append(
            Token(
                surface=m.group(),
                norm=m.group().lower(),
                index=i,
                sentence_id=sent,
                sentence_start=(sent != prev_sent),
            )
        )
        prev_sent = sent
    return tokens


def _is_all_caps(surface: str) -> bool:
    return len(surface) >= 2 and surface.isupper()


def tag_pos(tokens: list[Token]) -> list[Token]:
    """Assign a part of speech to every token.

    Rule order: stoplist, digit-initial numbers, lexicon lookup, then for
    unknown words capitalization (mid-sentence capitalized or all-caps ->
    proper noun) ahead of suffix heuristics, with NOUN as the fallback.
    Capitalization must win over suffixes or names like "Petraeus" would be
    tagged as -ous adjectives.
    """
    stop = stopwords()
    lex = lexicon()
    out: list[Token] = []
    for tok in tokens:
        norm, surface = tok.norm, tok.surface
        if norm in stop:
            pos = STOPWORD
        elif surface[0].isdigit():
            pos = NUMBER
        elif norm in lex:
            pos = lex[norm]
        elif _is_all_caps(surface) or (surface[0].isupper() and not tok.sentence_start):
            pos = PROPER_NOUN
        elif norm.endswith("ly"):
            pos = OTHER
        elif norm.endswith(("ing", "ed")):
            pos = VERB
        elif norm.endswith(_ADJ_SUFFIXES):
            pos = ADJECTIVE
        else:
            pos = NOUN
        out.append(
            Token(
                surface=surface,
                norm=norm,
                index=tok.index,
                sentence_id=tok.sentence_id,
                pos=pos,
                sentence_start=tok.sentence_start,
            )
        )
    return out


def analyze(text: str) -> list[Token]:
    """tokenize + tag_pos in one step."""
    return tag_pos(tokenize(text))


def _pattern_runs(tokens: list[Token]) -> list[list[Token]]:
    """Maximal in-sentence runs matching (ADJECTIVE)*(NOUN|PROPER_NOUN)+."""
    runs: list[list[Token]] = []
    adjectives: list[Token] = []
    nouns: list[Token] = []
    prev_sent = -1

    def flush() -> None:
        nonlocal adjectives, nouns
        if nouns:
            runs.append(adjectives + nouns)
        adjectives, nouns = [], []

    for tok in tokens:
        if tok.sentence_id != prev_sent:
            flush()
            prev_sent = tok.sentence_id
        if tok.pos in (NOUN, PROPER_NOUN):
            nouns.append(tok)
        elif tok.pos == ADJECTIVE:
            if nouns:
                flush()
            adjectives.append(tok)
        else:
            flush()
    flush()
    return runs


def extract_noun_phrases(tokens: list[Token]) -> set[Phrase]:
    """Bigram noun phrases matching (ADJECTIVE)*(NOUN|PROPER_NOUN)+.

    Pattern matches longer than two words are truncated from the left down to
    their final two words.  Single-word matches yield no phrase.  Each
    distinct word pair keeps the earliest first-token index over its
    occurrences.
    """
    earliest: dict[tuple[str, str], int] = {}
    for run in _pattern_runs(tokens):
        if len(run) < 2:
            continue
        pair = run[-2:]
        key = (pair[0].norm, pair[1].norm)
        idx = pair[0].index
        if key not in earliest or idx < earliest[key]:
            earliest[key] = idx
    return {Phrase(words=k, first_index=i) for k, i in earliest.items()}


def extract_proper_noun_unigrams(
    tokens: list[Token], *, upper_case_only: bool = False
) -> set[Phrase]:
    """Distinct proper-noun unigrams with their earliest index.

    With ``upper_case_only`` set, only norms seen with an all-caps surface
    survive -- the domain prune for system and program names.
    """
    earliest: dict[str, int] = {}
    for tok in tokens:
        if tok.pos != PROPER_NOUN:
            continue
        if upper_case_only and not _is_all_caps(tok.surface):
            continue
        if tok.norm not in earliest:
            earliest[tok.norm] = tok.index
    return {Phrase(words=(w,), first_index=i) for w, i in earliest.items()}
