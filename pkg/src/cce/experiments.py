"""Experiment harnesses: exhaustive hyperparameter grid search and the
hybrid-vs-note-only training comparison.

The grid is the full Cartesian product over hidden sizes, learning rates,
mini-batch sizes and embedding provider variants; each cell is trained
`evals_per_config` times with seeds derived as seed + run_index and ranked
by mean dev micro-F1.  Failures are recorded per cell without aborting the
rest of the grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable

from cce.corpus import Corpus, SplitSpec, merge_hybrid, split
from cce.embeddings import EmbeddingProvider
from cce.evaluation import micro_f1
from cce.tagger import TrainConfig, predict_corpus, train


@dataclass(frozen=True)
class HyperSpace:
    hidden_sizes: tuple[int, ...] = (128, 256)
    learning_rates: tuple[float, ...] = (0.05, 0.1)
    mini_batch_sizes: tuple[int, ...] = (32, 64, 128)
    embeddings: tuple[str, ...] = ("default",)

    def __post_init__(self):
        for name in ("hidden_sizes", "learning_rates", "mini_batch_sizes", "embeddings"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def size(self) -> int:
        return (
            len(self.hidden_sizes)
            * len(self.learning_rates)
            * len(self.mini_batch_sizes)
            * len(self.embeddings)
        )


@dataclass(frozen=True)
class HyperResult:
    hidden_size: int
    learning_rate: float
    mini_batch_size: int
    embedding: str
    seeds: tuple[int, ...]
    dev_f1s: tuple[float, ...]
    mean_dev_f1: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "hidden_size": self.hidden_size,
            "learning_rate": self.learning_rate,
            "mini_batch_size": self.mini_batch_size,
            "embedding": self.embedding,
            "seeds": list(self.seeds),
            "dev_f1s": list(self.dev_f1s),
            "mean_dev_f1": self.mean_dev_f1,
            "error": self.error,
        }


def grid_search(
    space: HyperSpace,
    train_corpus: Corpus,
    dev_corpus: Corpus,
    provider_factory: Callable[[str], EmbeddingProvider],
    evals_per_config: int = 3,
    epochs: int = 10,
    seed: int = 0,
) -> tuple[HyperResult, list[HyperResult]]:
    """Run every configuration; return (best by mean dev F1, full table).

    Ties on the mean break toward the earlier configuration in product
    order, which makes the report deterministic for a fixed seed.
    """
    table: list[HyperResult] = []
    for embedding, hidden, lr, batch in itertools.product(
        space.embeddings, space.hidden_sizes, space.learning_rates, space.mini_batch_sizes
    ):
        provider = provider_factory(embedding)
        seeds: list[int] = []
        scores: list[float] = []
        error: str | None = None
        for run in range(evals_per_config):
            run_seed = seed + run
            seeds.append(run_seed)
            config = TrainConfig(
                hidden_size=hidden,
                learning_rate=lr,
                mini_batch_size=batch,
                epochs=epochs,
                seed=run_seed,
            )
            try:
                _, log = train(train_corpus, dev_corpus, provider, config)
                scores.append(max(record.dev_f1 for record in log))
            except Exception as exc:  # record and continue with the grid
                error = f"{type(exc).__name__}: {exc}"
        mean = sum(scores) / len(scores) if scores else 0.0
        table.append(
            HyperResult(
                hidden_size=hidden,
                learning_rate=lr,
                mini_batch_size=batch,
                embedding=embedding,
                seeds=tuple(seeds),
                dev_f1s=tuple(scores),
                mean_dev_f1=mean,
                error=error,
            )
        )
    best = max(table, key=lambda r: r.mean_dev_f1)
    return best, table


@dataclass(frozen=True)
class ComparisonRow:
    """The four F1 cells for one seed: two models x two test sets."""

    seed: int
    hybrid_on_query: float
    hybrid_on_note: float
    note_only_on_query: float
    note_only_on_note: float

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "hybrid_on_query": self.hybrid_on_query,
            "hybrid_on_note": self.hybrid_on_note,
            "note_only_on_query": self.note_only_on_query,
            "note_only_on_note": self.note_only_on_note,
        }


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    mean_hybrid_on_query: float
    mean_hybrid_on_note: float
    mean_note_only_on_query: float
    mean_note_only_on_note: float

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "means": {
                "hybrid_on_query": self.mean_hybrid_on_query,
                "hybrid_on_note": self.mean_hybrid_on_note,
                "note_only_on_query": self.mean_note_only_on_query,
                "note_only_on_note": self.mean_note_only_on_note,
            },
        }


def _f1(params, provider, gold: Corpus) -> float:
    return micro_f1(gold, predict_corpus(params, provider, gold)).micro_f1


def table1_experiment(
    note_corpus: Corpus,
    query_corpus: Corpus,
    provider: EmbeddingProvider,
    config: TrainConfig,
    seeds,
) -> ComparisonReport:
    """Per seed: split both corpora 7:2:1, build the hybrid sets, train a
    hybrid model and a note-only model with identical configs, and score
    both on the query-style and note-style test splits."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    rows: list[ComparisonRow] = []
    for seed in seeds:
        note_splits = split(note_corpus, SplitSpec(seed=seed))
        query_splits = split(query_corpus, SplitSpec(seed=seed))
        hybrid_train, hybrid_dev, _ = merge_hybrid(note_splits, query_splits, seed=seed)
        run_config = replace(config, seed=seed)
        hybrid_params, _ = train(hybrid_train, hybrid_dev, provider, run_config)
        note_params, _ = train(note_splits[0], note_splits[1], provider, run_config)
        rows.append(
            ComparisonRow(
                seed=seed,
                hybrid_on_query=_f1(hybrid_params, provider, query_splits[2]),
                hybrid_on_note=_f1(hybrid_params, provider, note_splits[2]),
                note_only_on_query=_f1(note_params, provider, query_splits[2]),
                note_only_on_note=_f1(note_params, provider, note_splits[2]),
            )
        )

    def mean(values) -> float:
        values = list(values)
        return sum(values) / len(values)

    return ComparisonReport(
        rows=tuple(rows),
        mean_hybrid_on_query=mean(r.hybrid_on_query for r in rows),
        mean_hybrid_on_note=mean(r.hybrid_on_note for r in rows),
        mean_note_only_on_query=mean(r.note_only_on_query for r in rows),
        mean_note_only_on_note=mean(r.note_only_on_note for r in rows),
    )
