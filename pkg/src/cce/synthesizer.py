"""Synthetic training data: glossary model, query-style and note-style generators.

Query-style sentences are random glossary terms concatenated with no
separators (every token tagged B or I, never O).  Note-style sentences fill
``{E}`` slots in filler templates with glossary terms, so they always carry
O tags.  Both generators are pure functions of an explicit numpy Generator,
so callers can parallelize across disjoint seed streams.

Glossary files: one term per line, ``<cid>\\t<concept_type>\\t<term text>``.
Template files: one template per line, ``{E}`` marks an entity slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from cce.corpus import BioTag, Corpus, Provenance, TaggedSentence, tokenize
from cce.errors import CceError


class EmptyGlossaryError(CceError):
    """Synthesis from a glossary with no terms."""


class InvalidGlossaryError(CceError):
    """A glossary file line that is not ``<cid>\\t<type>\\t<text>``, or a duplicate cid."""


class BadTemplateError(CceError):
    """A note template without an {E} slot or without filler words."""


ENTITY_SLOT = "{E}"


@dataclass(frozen=True)
class GlossaryTerm:
    """One searchable glossary entry: id, concept type, surface text."""

    cid: str
    concept_type: str
    text: str
    words: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if not self.cid:
            raise ValueError("cid must be non-empty")
        words = tuple(tokenize(self.text))
        if not words:
            raise ValueError(f"term text {self.text!r} has no words")
        object.__setattr__(self, "words", words)


@dataclass(frozen=True)
class Glossary:
    terms: tuple[GlossaryTerm, ...]
    by_cid: dict[str, GlossaryTerm] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        index: dict[str, GlossaryTerm] = {}
        for term in self.terms:
            if term.cid in index:
                raise InvalidGlossaryError(f"duplicate cid {term.cid!r}")
            index[term.cid] = term
        object.__setattr__(self, "by_cid", index)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


@dataclass(frozen=True)
class SynthesisConfig:
    min_terms: int = 1
    max_terms: int = 5
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if not (1 <= self.min_terms <= self.max_terms):
            raise ValueError(
                f"need 1 <= min_terms <= max_terms, got {self.min_terms}..{self.max_terms}"
            )
        if self.count < 0:
            raise ValueError(f"count must be non-negative: {self.count}")


def parse_glossary(text: str) -> Glossary:
    terms: list[GlossaryTerm] = []
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise InvalidGlossaryError(
                f"line {line_no}: expected <cid>\\t<type>\\t<text>, got {line!r}"
            )
        try:
            terms.append(GlossaryTerm(cid=parts[0], concept_type=parts[1], text=parts[2]))
        except ValueError as exc:
            raise InvalidGlossaryError(f"line {line_no}: {exc}") from None
    return Glossary(tuple(terms))


def load_glossary(path) -> Glossary:
    with open(path, encoding="utf-8") as handle:
        return parse_glossary(handle.read())


def synthesize_query(
    glossary: Glossary, rng: np.random.Generator, config: SynthesisConfig
) -> TaggedSentence:
    """One query-style sentence: k distinct terms, shuffled, concatenated.

    k is uniform in [min_terms, max_terms], capped at the glossary size so
    terms can be sampled without replacement.
    """
    if len(glossary) == 0:
        raise EmptyGlossaryError("cannot synthesize from an empty glossary")
    k = int(rng.integers(config.min_terms, config.max_terms + 1))
    k = min(k, len(glossary))
    picks = rng.choice(len(glossary), size=k, replace=False)
    rng.shuffle(picks)
    texts: list[str] = []
    tags: list[BioTag] = []
    for index in picks:
        words = glossary.terms[int(index)].words
        texts.extend(words)
        tags.append(BioTag.B)
        tags.extend([BioTag.I] * (len(words) - 1))
    return TaggedSentence.from_texts(texts, tags, provenance=Provenance.QUERY_STYLE)


def synthesize_query_corpus(glossary: Glossary, config: SynthesisConfig) -> Corpus:
    if len(glossary) == 0:
        raise EmptyGlossaryError("cannot synthesize from an empty glossary")
    rng = np.random.default_rng(config.seed)
    sentences = tuple(
        synthesize_query(glossary, rng, config) for _ in range(config.count)
    )
    return Corpus(sentences, name="synthesized-queries")


def _validate_template(template: str) -> list[str]:
    pieces = template.split()
    slots = sum(1 for piece in pieces if piece == ENTITY_SLOT)
    if slots == 0:
        raise BadTemplateError(f"template {template!r} has no {ENTITY_SLOT} slot")
    if slots == len(pieces):
        raise BadTemplateError(f"template {template!r} has no filler words")
    return [piece if piece == ENTITY_SLOT else piece.lower() for piece in pieces]


def parse_templates(text: str) -> list[str]:
    templates = [line.strip() for line in text.split("\n")]
    templates = [line for line in templates if line and not line.startswith("#")]
    for template in templates:
        _validate_template(template)
    return templates


def load_templates(path) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return parse_templates(handle.read())


def toy_glossary() -> Glossary:
    """The 50-term glossary bundled for demos and experiments."""
    text = resources.files("cce.data").joinpath("toy_glossary.tsv").read_text("utf-8")
    return parse_glossary(text)


def default_note_templates() -> list[str]:
    """The note-style sentence templates bundled with the package."""
    text = resources.files("cce.data").joinpath("note_templates.txt").read_text("utf-8")
    return parse_templates(text)


def synthesize_note_corpus(
    glossary: Glossary, templates: list[str], config: SynthesisConfig
) -> Corpus:
    """Note-style sentences: templates with {E} slots filled by random terms.

    Filler words are tagged O; slot words B I*.  Every output sentence
    therefore carries at least one O tag and one entity.
    """
    if len(glossary) == 0:
        raise EmptyGlossaryError("cannot synthesize from an empty glossary")
    if not templates:
        raise BadTemplateError("no templates given")
    parsed = [_validate_template(template) for template in templates]
    rng = np.random.default_rng(config.seed)
    sentences: list[TaggedSentence] = []
    for _ in range(config.count):
        pieces = parsed[int(rng.integers(len(parsed)))]
        texts: list[str] = []
        tags: list[BioTag] = []
        for piece in pieces:
            if piece == ENTITY_SLOT:
                term = glossary.terms[int(rng.integers(len(glossary)))]
                texts.extend(term.words)
                tags.append(BioTag.B)
                tags.extend([BioTag.I] * (len(term.words) - 1))
            else:
                texts.append(piece)
                tags.append(BioTag.O)
        sentences.append(
            TaggedSentence.from_texts(texts, tags, provenance=Provenance.NOTE_STYLE)
        )
    return Corpus(tuple(sentences), name="synthesized-notes")
