"""Mini-batch SGD training of the tagger, plus inference entry points.

The loss is the mean negative log-likelihood over the batch; updates are
plain SGD with a constant learning rate and a global-norm gradient clip at
5.0 (small corpora otherwise diverge at the default learning rate).  After
every epoch the dev-set span micro-F1 is recorded and the parameters from
the best dev epoch are returned.  Identical seeds give bitwise-identical
training logs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cce.corpus import (
    TAG_INDEX,
    TAGS,
    Corpus,
    EmptyCorpusError,
    Provenance,
    TaggedSentence,
    repair_bio,
    tokenize,
)
from cce.embeddings import EmbeddingProvider
from cce.errors import CceError
from cce.evaluation import micro_f1
from cce.tagger import crf, network
from cce.tagger.network import TaggerParams

MAX_GRAD_NORM = 5.0


class EmptyQueryError(CceError):
    """A query with no tokens after tokenization."""


@dataclass(frozen=True)
class TrainConfig:
    hidden_size: int = 256
    learning_rate: float = 0.05
    mini_batch_size: int = 32
    epochs: int = 10
    dropout: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.hidden_size <= 0 or self.mini_batch_size <= 0 or self.epochs <= 0:
            raise ValueError("hidden_size, mini_batch_size and epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive: {self.learning_rate}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1): {self.dropout}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_nll: float
    dev_f1: float


def gradients(
    params: TaggerParams,
    batch,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean NLL over a batch of (X, y) pairs and its exact gradients.

    Gradient keys match params.tensors(); the frozen -inf transition
    entries always get gradient zero.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    total = {name: np.zeros_like(tensor) for name, tensor in params.tensors().items()}
    total_nll = 0.0
    for X, y in batch:
        cache = network.forward(params, X, dropout=dropout, rng=rng)
        nll, dP, dA = crf.nll_and_gradients(cache.P, params.transitions, y)
        for name, grad in network.backward(params, cache, dP).items():
            total[name] += grad
        total["transitions"] += dA
        total_nll += nll
    scale = 1.0 / len(batch)
    for name in total:
        total[name] *= scale
    return total_nll * scale, total


def _clip(grads: dict[str, np.ndarray], max_norm: float) -> None:
    norm = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if norm > max_norm:
        factor = max_norm / norm
        for grad in grads.values():
            grad *= factor


def _sgd_step(params: TaggerParams, grads: dict[str, np.ndarray], lr: float) -> None:
    for name, tensor in params.tensors().items():
        tensor -= lr * grads[name]


def _tag_indices(sentence: TaggedSentence) -> np.ndarray:
    return np.array([TAG_INDEX[tag] for tag in sentence.tags], dtype=np.int64)


def _predict_sentence(params: TaggerParams, X: np.ndarray, sentence: TaggedSentence) -> TaggedSentence:
    P = network.forward(params, X).P
    path, _ = crf.viterbi(P, params.transitions)
    tags = repair_bio(TAGS[i] for i in path)
    return TaggedSentence(tokens=sentence.tokens, tags=tags, provenance=sentence.provenance)


def train(
    train_corpus: Corpus,
    dev_corpus: Corpus,
    provider: EmbeddingProvider,
    config: TrainConfig,
) -> tuple[TaggerParams, list[EpochRecord]]:
    """Train on train_corpus, track dev micro-F1, return the best-epoch params.

    Sentence embeddings are computed once up front (the provider is static,
    so re-embedding per epoch would only repeat work).
    """
    if len(train_corpus) == 0:
        raise EmptyCorpusError("training corpus is empty")
    rng = np.random.default_rng(config.seed)
    params = TaggerParams.init(provider.dimension, config.hidden_size, rng)

    train_X = [provider.embed(s.texts) for s in train_corpus]
    train_y = [_tag_indices(s) for s in train_corpus]
    dev_X = [provider.embed(s.texts) for s in dev_corpus]

    n = len(train_corpus)
    batch_size = min(config.mini_batch_size, n)
    best = params.copy()
    best_f1 = -1.0
    log: list[EpochRecord] = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        nll_sum = 0.0
        for lo in range(0, n, batch_size):
            chosen = order[lo: lo + batch_size]
            batch = [(train_X[i], train_y[i]) for i in chosen]
            nll, grads = gradients(params, batch, dropout=config.dropout, rng=rng)
            nll_sum += nll * len(chosen)
            _clip(grads, MAX_GRAD_NORM)
            _sgd_step(params, grads, config.learning_rate)
        dev_f1 = 0.0
        if len(dev_corpus) > 0:
            predictions = Corpus(
                tuple(
                    _predict_sentence(params, X, sentence)
                    for X, sentence in zip(dev_X, dev_corpus)
                ),
                name="dev-predictions",
            )
            dev_f1 = micro_f1(dev_corpus, predictions).micro_f1
        log.append(EpochRecord(epoch=epoch, train_nll=nll_sum / n, dev_f1=dev_f1))
        if dev_f1 > best_f1:
            best_f1 = dev_f1
            best = params.copy()
    return best, log


def tag(params: TaggerParams, provider: EmbeddingProvider, query_text: str) -> TaggedSentence:
    """Tokenize, embed, score and decode one query.

    Output tags are BIO-repaired, so the sentence always decodes cleanly.
    """
    tokens = tokenize(query_text)
    if not tokens:
        raise EmptyQueryError(f"no tokens in query {query_text!r}")
    X = provider.embed(tokens)
    P = network.emissions(params, X, mode="infer")
    path, _ = crf.viterbi(P, params.transitions)
    tags = repair_bio(TAGS[i] for i in path)
    return TaggedSentence.from_texts(tokens, tags, provenance=Provenance.QUERY_STYLE)


def predict_corpus(params: TaggerParams, provider: EmbeddingProvider, corpus: Corpus) -> Corpus:
    """Re-tag every sentence of a corpus with the model's predictions."""
    predicted = tuple(
        _predict_sentence(params, provider.embed(sentence.texts), sentence)
        for sentence in corpus
    )
    return Corpus(predicted, name=f"{corpus.name}:predicted" if corpus.name else "predicted")
