"""BIO-tagged corpus model: ingestion, splitting, hybrid merging, span decoding.

Corpus files are UTF-8 text with one ``<token>\\t<tag>`` pair per line
(tag in {B, I, O}) and a blank line ending each sentence.  An optional
``#provenance: note_style|query_style`` line applies to the sentences that
follow it; a corpus with mixed provenance serializes with one such line per
change so that parse/serialize round-trips exactly.

All values are immutable after construction and safe to share across
threads.  Shuffling (splits, hybrid merging) uses numpy's seeded PCG64
generator, so splits are reproducible across runs and platforms.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass

import numpy as np

from cce.errors import CceError


class MalformedLineError(CceError):
    """A corpus line that is not ``<token>\\t<tag>`` with a known tag."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InvalidBioError(CceError):
    """A tag sequence with a leading I or an I directly after an O."""

    def __init__(self, sentence_no: int, message: str):
        super().__init__(f"sentence {sentence_no}: {message}")
        self.sentence_no = sentence_no


class EmptyCorpusError(CceError):
    """An operation that needs at least one sentence got none."""


class BioTag(str, enum.Enum):
    B = "B"
    I = "I"
    O = "O"


TAGS: tuple[BioTag, ...] = (BioTag.B, BioTag.I, BioTag.O)
TAG_INDEX: dict[BioTag, int] = {tag: i for i, tag in enumerate(TAGS)}


class Provenance(str, enum.Enum):
    NOTE_STYLE = "note_style"
    QUERY_STYLE = "query_style"
    UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    index: int  # 0-based position in the sentence

    def __post_init__(self):
        if not self.text or any(ch.isspace() for ch in self.text):
            raise ValueError(f"token text must be non-empty without whitespace: {self.text!r}")
        if self.index < 0:
            raise ValueError(f"token index must be non-negative: {self.index}")


@dataclass(frozen=True)
class TaggedSentence:
    """A sentence with one BIO tag per token.

    Token indices must equal their positions.  BIO validity is *not*
    enforced here: corpora built by :func:`parse_corpus` or the synthesizer
    are always valid, but raw model output may contain orphan I tags until
    repaired (see :func:`extract_entities` and :func:`repair_bio`).
    """

    tokens: tuple[Token, ...]
    tags: tuple[BioTag, ...]
    provenance: Provenance = Provenance.UNKNOWN

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "tags", tuple(BioTag(t) for t in self.tags))
        object.__setattr__(self, "provenance", Provenance(self.provenance))
        if not self.tokens:
            raise ValueError("a sentence must contain at least one token")
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{len(self.tokens)} tokens but {len(self.tags)} tags"
            )
        for pos, token in enumerate(self.tokens):
            if token.index != pos:
                raise ValueError(f"token {token.text!r} has index {token.index}, expected {pos}")

    @classmethod
    def from_texts(cls, texts, tags, provenance=Provenance.UNKNOWN) -> "TaggedSentence":
        tokens = tuple(Token(text, i) for i, text in enumerate(texts))
        return cls(tokens=tokens, tags=tuple(tags), provenance=provenance)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(token.text for token in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of tagged sentences.

    Corpora produced by ingestion or synthesis contain only sentences with
    at least one non-O tag (all-O sentences are dropped at parse time);
    prediction corpora built from model output may violate that.
    """

    sentences: tuple[TaggedSentence, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


@dataclass(frozen=True, slots=True)
class EntitySpan:
    """A contiguous entity: token span [start, end) plus its surface text."""

    start: int
    end: int
    text: str

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span bounds ({self.start}, {self.end})")


@dataclass(frozen=True)
class SplitSpec:
    """Fractions and seed for a deterministic train/dev/test split."""

    train_frac: float = 0.7
    dev_frac: float = 0.2
    test_frac: float = 0.1
    seed: int = 0

    def __post_init__(self):
        fracs = (self.train_frac, self.dev_frac, self.test_frac)
        if any(f <= 0 for f in fracs):
            raise ValueError(f"split fractions must be positive: {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1: {fracs}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative: {self.seed}")


_PROVENANCE_PREFIX = "#provenance:"


def _bio_check(tags: tuple[BioTag, ...]) -> str | None:
    """Return a description of the first BIO violation, or None if valid."""
    previous = None
    for pos, tag in enumerate(tags):
        if tag is BioTag.I and (pos == 0 or previous is BioTag.O):
            return f"orphan I tag at position {pos}"
        previous = tag
    return None


def parse_corpus(text: str, name: str = "") -> Corpus:
    """Parse column-format text into a corpus, dropping all-O sentences.

    Raises MalformedLineError for bad columns/tags/tokens and
    InvalidBioError for BIO-invalid tag sequences.
    """
    sentences: list[TaggedSentence] = []
    texts: list[str] = []
    tags: list[BioTag] = []
    provenance = Provenance.UNKNOWN
    sentence_no = 0

    def flush():
        nonlocal sentence_no
        if not texts:
            return
        sentence_no += 1
        problem = _bio_check(tuple(tags))
        if problem is not None:
            raise InvalidBioError(sentence_no, problem)
        if any(tag is not BioTag.O for tag in tags):
            sentences.append(TaggedSentence.from_texts(texts, tags, provenance))
        texts.clear()
        tags.clear()

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line.startswith(_PROVENANCE_PREFIX):
            flush()
            value = line[len(_PROVENANCE_PREFIX):].strip()
            try:
                provenance = Provenance(value)
            except ValueError:
                raise MalformedLineError(line_no, f"unknown provenance {value!r}") from None
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedLineError(line_no, f"expected <token>\\t<tag>, got {line!r}")
        token_text, tag_text = parts
        try:
            tag = BioTag(tag_text)
        except ValueError:
            raise MalformedLineError(line_no, f"unknown tag {tag_text!r}") from None
        if not token_text or any(ch.isspace() for ch in token_text):
            raise MalformedLineError(line_no, f"bad token {token_text!r}")
        texts.append(token_text)
        tags.append(tag)
    flush()
    return Corpus(tuple(sentences), name=name)


def serialize_corpus(corpus: Corpus) -> str:
    """Inverse of parse_corpus; emits a provenance line whenever it changes."""
    lines: list[str] = []
    current = Provenance.UNKNOWN
    for sentence in corpus:
        if sentence.provenance is not current:
            lines.append(f"{_PROVENANCE_PREFIX} {sentence.provenance.value}")
            current = sentence.provenance
        for token, tag in zip(sentence.tokens, sentence.tags):
            lines.append(f"{token.text}\t{tag.value}")
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def load_corpus(path, name: str | None = None) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle.read(), name=name if name is not None else str(path))


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_corpus(corpus))


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic shuffled split into (train, dev, test).

    Sizes are floor(n * frac) with all remainder sentences assigned to
    train; afterwards an empty dev/test split steals one sentence from
    train as long as train keeps at least one.
    """
    n = len(corpus)
    if n == 0:
        raise EmptyCorpusError(f"cannot split empty corpus {corpus.name!r}")
    counts = [
        int(n * spec.train_frac),
        int(n * spec.dev_frac),
        int(n * spec.test_frac),
    ]
    counts[0] += n - sum(counts)
    for i in (1, 2):
        if counts[i] == 0 and counts[0] > 1:
            counts[0] -= 1
            counts[i] += 1
    order = np.random.default_rng(spec.seed).permutation(n)
    shuffled = [corpus.sentences[i] for i in order]
    bounds = (counts[0], counts[0] + counts[1])
    parts = (shuffled[: bounds[0]], shuffled[bounds[0]: bounds[1]], shuffled[bounds[1]:])
    labels = ("train", "dev", "test")
    prefix = f"{corpus.name}:" if corpus.name else ""
    return tuple(
        Corpus(tuple(part), name=f"{prefix}{label}")
        for part, label in zip(parts, labels)
    )


def merge_corpora(corpora, seed: int, name: str = "merged") -> Corpus:
    """Concatenate corpora and reshuffle deterministically."""
    combined: tuple[TaggedSentence, ...] = ()
    for corpus in corpora:
        combined += corpus.sentences
    order = np.random.default_rng(seed).permutation(len(combined))
    return Corpus(tuple(combined[i] for i in order), name=name)


def merge_hybrid(
    a: tuple[Corpus, Corpus, Corpus],
    b: tuple[Corpus, Corpus, Corpus],
    seed: int,
) -> tuple[Corpus, Corpus, Corpus]:
    """Concatenate two split triples per split and reshuffle each split.

    Concatenation keeps the a:b ratio inside every hybrid split equal to
    the ratio of the inputs.
    """
    rng = np.random.default_rng(seed)
    merged = []
    for label, part_a, part_b in zip(("train", "dev", "test"), a, b):
        combined = part_a.sentences + part_b.sentences
        order = rng.permutation(len(combined))
        merged.append(Corpus(tuple(combined[i] for i in order), name=f"hybrid:{label}"))
    return tuple(merged)


def extract_entities(sentence: TaggedSentence, strict: bool = False) -> list[EntitySpan]:
    """Decode maximal B I* runs into spans, left to right.

    Lenient mode (default) repairs an orphan I (leading, or directly after
    an O) by treating it as a B; strict mode raises InvalidBioError.
    """
    if strict:
        problem = _bio_check(sentence.tags)
        if problem is not None:
            raise InvalidBioError(0, problem)
    spans: list[EntitySpan] = []
    start: int | None = None

    def close(end: int):
        nonlocal start
        if start is not None:
            text = " ".join(t.text for t in sentence.tokens[start:end])
            spans.append(EntitySpan(start, end, text))
            start = None

    for pos, tag in enumerate(sentence.tags):
        if tag is BioTag.O:
            close(pos)
        elif tag is BioTag.B:
            close(pos)
            start = pos
        elif start is None:  # orphan I, repaired to B
            start = pos
    close(len(sentence))
    return spans


def repair_bio(tags) -> tuple[BioTag, ...]:
    """Rewrite orphan I tags as B; identity on BIO-valid sequences."""
    repaired: list[BioTag] = []
    previous = None
    for tag in (BioTag(t) for t in tags):
        if tag is BioTag.I and (previous is None or previous is BioTag.O):
            tag = BioTag.B
        repaired.append(tag)
        previous = tag
    return tuple(repaired)


def spans_to_bio(spans, length: int) -> tuple[BioTag, ...]:
    """Encode non-overlapping spans back into a BIO tag sequence."""
    tags = [BioTag.O] * length
    for span in spans:
        if span.end > length:
            raise ValueError(f"span ({span.start}, {span.end}) exceeds length {length}")
        if any(tag is not BioTag.O for tag in tags[span.start: span.end]):
            raise ValueError(f"span ({span.start}, {span.end}) overlaps another span")
        tags[span.start] = BioTag.B
        for i in range(span.start + 1, span.end):
            tags[i] = BioTag.I
    return tuple(tags)


_PUNCTUATION = frozenset(string.punctuation)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace, peeling leading/trailing
    punctuation characters off as separate tokens."""
    tokens: list[str] = []
    for chunk in text.lower().split():
        head: list[str] = []
        tail: list[str] = []
        while chunk and chunk[0] in _PUNCTUATION:
            head.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCTUATION:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens
