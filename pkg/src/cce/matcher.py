"""Glossary term matching: stemmed candidate retrieval plus
information-coverage scoring.

Retrieval is deliberately loose: a glossary term is a candidate when it
shares ANY stemmed non-stopword word with the entity.  Each candidate is
then scored by how well the entity's words cover the candidate's words in
embedding space: per candidate word take the best cosine similarity
against all entity words, zero it unless strictly above the cutoff s_c,
and average over the candidate's countable words (words on the extra
stopword list, by default "configuration" and "color", do not count).
The 1/m normalization prefers concise candidates.

Stemming applies to retrieval only; similarities use the surface words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

import numpy as np

from cce.corpus import EntitySpan
from cce.embeddings import EmbeddingProvider, similarity
from cce.errors import CceError
from cce.stemming import stem
from cce.synthesizer import Glossary, GlossaryTerm


class NoContentWordsError(CceError):
    """Every word of the entity is a stopword; retrieval is undefined."""


class NoCountableWordsError(CceError):
    """Every word of the candidate term is an extra stopword."""


DEFAULT_EXTRA_STOPWORDS = frozenset({"configuration", "color"})


def default_stopwords() -> frozenset[str]:
    """The fixed English stopword list shipped with the package."""
    text = resources.files("cce.data").joinpath("stopwords.txt").read_text("utf-8")
    words = (line.strip() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


@dataclass(frozen=True)
class MatcherConfig:
    s_c: float = 0.6
    min_score: float = 0.0
    top_k: int = 10
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    extra_stopwords: frozenset[str] = DEFAULT_EXTRA_STOPWORDS

    def __post_init__(self):
        if not -1.0 <= self.s_c <= 1.0:
            raise ValueError(f"s_c must be in [-1, 1]: {self.s_c}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1: {self.top_k}")


class Match(NamedTuple):
    """One ranked result, in the (cid, type, score) output shape."""

    cid: str
    concept_type: str
    score: float


@dataclass(frozen=True)
class StemIndex:
    """Inverted index stem -> cids over a glossary's non-stopword words."""

    by_stem: dict[str, frozenset[str]]
    glossary: Glossary


@dataclass(frozen=True)
class ScoredCandidate:
    """A candidate with its per-countable-word best similarities."""

    term: GlossaryTerm
    word_similarities: tuple[float, ...]
    score: float


def build_index(glossary: Glossary, config: MatcherConfig) -> StemIndex:
    """Index every term under the stems of its non-stopword words.

    A term whose words are all stopwords is unreachable by retrieval.
    """
    by_stem: dict[str, set[str]] = {}
    for term in glossary:
        for word in term.words:
            if word in config.stopwords:
                continue
            by_stem.setdefault(stem(word), set()).add(term.cid)
    return StemIndex(
        by_stem={key: frozenset(cids) for key, cids in by_stem.items()},
        glossary=glossary,
    )


def _entity_words(entity: EntitySpan) -> list[str]:
    return entity.text.lower().split()


def candidates(index: StemIndex, entity: EntitySpan, config: MatcherConfig) -> list[GlossaryTerm]:
    """Terms sharing ANY stemmed non-stopword word with the entity, by cid."""
    content = [w for w in _entity_words(entity) if w not in config.stopwords]
    if not content:
        raise NoContentWordsError(f"entity {entity.text!r} has only stopwords")
    found: set[str] = set()
    for word in content:
        found |= index.by_stem.get(stem(word), frozenset())
    return [index.glossary.by_cid[cid] for cid in sorted(found)]


def sim_matrix(term: GlossaryTerm, entity: EntitySpan, provider: EmbeddingProvider) -> np.ndarray:
    """Pairwise cosine similarities, term words (rows) x entity words (columns)."""
    term_vectors = provider.embed(term.words)
    entity_vectors = provider.embed(_entity_words(entity))
    matrix = np.empty((len(term_vectors), len(entity_vectors)))
    for i, tv in enumerate(term_vectors):
        for j, ev in enumerate(entity_vectors):
            matrix[i, j] = similarity(tv, ev)
    return matrix


def countable_mask(term: GlossaryTerm, config: MatcherConfig) -> np.ndarray:
    return np.array([word not in config.extra_stopwords for word in term.words])


def coverage_score(matrix: np.ndarray, mask: np.ndarray, config: MatcherConfig) -> float:
    """Mean over countable rows of the row max, zeroed unless > s_c."""
    if matrix.shape[0] != len(mask):
        raise ValueError(f"mask length {len(mask)} != {matrix.shape[0]} rows")
    m = int(np.count_nonzero(mask))
    if m == 0:
        raise NoCountableWordsError("all term words are extra stopwords")
    row_max = matrix[mask].max(axis=1)
    kept = row_max[row_max > config.s_c]
    return float(kept.sum() / m)


def score_candidate(
    term: GlossaryTerm,
    entity: EntitySpan,
    provider: EmbeddingProvider,
    config: MatcherConfig,
) -> ScoredCandidate:
    matrix = sim_matrix(term, entity, provider)
    mask = countable_mask(term, config)
    score = coverage_score(matrix, mask, config)
    return ScoredCandidate(
        term=term,
        word_similarities=tuple(float(v) for v in matrix[mask].max(axis=1)),
        score=score,
    )


def match(
    entity: EntitySpan,
    index: StemIndex,
    provider: EmbeddingProvider,
    config: MatcherConfig,
) -> list[Match]:
    """Ranked (cid, type, score) triples for one entity.

    Candidates scoring <= min_score are dropped; ties break on cid.
    Candidates with no countable words cannot be scored and are skipped.
    """
    scored: list[Match] = []
    for term in candidates(index, entity, config):
        try:
            result = score_candidate(term, entity, provider, config)
        except NoCountableWordsError:
            continue
        if result.score > config.min_score:
            scored.append(Match(term.cid, term.concept_type, result.score))
    scored.sort(key=lambda m: (-m.score, m.cid))
    return scored[: config.top_k]
