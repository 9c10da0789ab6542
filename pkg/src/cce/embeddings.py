"""Static word vectors with deterministic out-of-vocabulary fallback.

Vector files use the common plain-text interchange format: one word per
line followed by its space-separated components; an optional first line
``<vocab_size> <dim>`` is detected and skipped.

Out-of-vocabulary words get, by default, the average of unit vectors
derived from the word's character 3-grams: each 3-gram is hashed with
64-bit FNV-1a and the hash seeds numpy's PCG64 generator, which draws a
standard-normal vector that is then normalized.  Identical words always
get identical vectors, in any sentence context.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from cce.errors import CceError


class DimensionMismatchError(CceError):
    """A vector line whose component count differs from the first line's."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyFileError(CceError):
    """A vector file with no vector lines."""


class OovMode(str, enum.Enum):
    HASHED_NGRAM = "hashed_ngram"
    ZERO = "zero"


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    value = _FNV_OFFSET
    for byte in data:
        value = ((value ^ byte) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return value


def _char_trigrams(word: str) -> list[str]:
    if len(word) < 3:
        return [word]
    return [word[i: i + 3] for i in range(len(word) - 2)]


@dataclass(frozen=True)
class EmbeddingProvider:
    """Immutable word -> vector map with a deterministic OOV fallback."""

    dimension: int
    vocabulary: dict[str, np.ndarray] = field(repr=False)
    oov_mode: OovMode = OovMode.HASHED_NGRAM

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError(f"dimension must be positive: {self.dimension}")
        object.__setattr__(self, "oov_mode", OovMode(self.oov_mode))
        for word, vector in self.vocabulary.items():
            if vector.shape != (self.dimension,):
                raise ValueError(
                    f"vector for {word!r} has shape {vector.shape}, expected ({self.dimension},)"
                )

    def vector(self, word: str) -> np.ndarray:
        stored = self.vocabulary.get(word)
        if stored is not None:
            return stored
        if self.oov_mode is OovMode.ZERO:
            return np.zeros(self.dimension)
        grams = _char_trigrams(word)
        total = np.zeros(self.dimension)
        for gram in grams:
            rng = np.random.default_rng(fnv1a_64(gram.encode("utf-8")))
            draw = rng.standard_normal(self.dimension)
            total += draw / np.linalg.norm(draw)
        return total / len(grams)

    def embed(self, tokens) -> np.ndarray:
        """Stack per-token vectors into an (n, dimension) matrix."""
        if len(tokens) == 0:
            raise ValueError("cannot embed an empty token list")
        return np.stack([self.vector(token) for token in tokens])


def embed(provider: EmbeddingProvider, tokens) -> np.ndarray:
    return provider.embed(tokens)


def load_vectors(text: str, oov_mode: OovMode = OovMode.HASHED_NGRAM) -> EmbeddingProvider:
    """Parse plain-text word vectors; dimension is inferred from the first line."""
    vocabulary: dict[str, np.ndarray] = {}
    dimension: int | None = None
    lines = text.split("\n")
    start = 1
    first = lines[0].split() if lines else []
    if len(first) == 2:
        try:
            int(first[0]), int(first[1])
            start = 2
        except ValueError:
            pass
    for line_no, raw in enumerate(lines[start - 1:], start=start):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        word, components = parts[0], parts[1:]
        if not components:
            raise DimensionMismatchError(line_no, f"no components for word {word!r}")
        try:
            vector = np.array([float(c) for c in components])
        except ValueError:
            raise DimensionMismatchError(line_no, f"non-numeric component in {line!r}") from None
        if dimension is None:
            dimension = len(vector)
        elif len(vector) != dimension:
            raise DimensionMismatchError(
                line_no, f"expected {dimension} components, got {len(vector)}"
            )
        vocabulary[word] = vector
    if dimension is None:
        raise EmptyFileError("vector file contains no vectors")
    return EmbeddingProvider(dimension=dimension, vocabulary=vocabulary, oov_mode=oov_mode)


def load_vectors_file(path, oov_mode: OovMode = OovMode.HASHED_NGRAM) -> EmbeddingProvider:
    with open(path, encoding="utf-8") as handle:
        return load_vectors(handle.read(), oov_mode=oov_mode)


def save_vectors(provider: EmbeddingProvider, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for word, vector in provider.vocabulary.items():
            handle.write(word + " " + " ".join(repr(v) for v in vector) + "\n")


def random_unit_provider(
    words, dimension: int, seed: int, oov_mode: OovMode = OovMode.HASHED_NGRAM
) -> EmbeddingProvider:
    """A provider mapping each given word to a seeded random unit vector.

    Useful for experiments where only word identity matters.
    """
    rng = np.random.default_rng(seed)
    vocabulary: dict[str, np.ndarray] = {}
    for word in sorted(set(words)):
        draw = rng.standard_normal(dimension)
        vocabulary[word] = draw / np.linalg.norm(draw)
    return EmbeddingProvider(dimension=dimension, vocabulary=vocabulary, oov_mode=oov_mode)


def similarity(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity in [-1, 1].

    Returns 0.0 when either vector is all-zero (the "no information"
    convention) and exactly 1.0 for identical nonzero vectors.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    norm_u = np.linalg.norm(u)
    norm_v = np.linalg.norm(v)
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    if np.array_equal(u, v):
        return 1.0
    value = float(np.dot(u, v) / (norm_u * norm_v))
    return max(-1.0, min(1.0, value))
