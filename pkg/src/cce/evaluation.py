"""Micro-averaged evaluation of tagged corpora.

Span-level scoring (the default) counts a predicted span as a true
positive only when an identical (start, end) span exists in the gold
sentence; counts are pooled over all sentences before computing
precision, recall and F1.  Token-level scoring pools per-class counts for
the B and I tags and is available behind the `level` flag.
"""

from __future__ import annotations

from dataclasses import dataclass

from cce.corpus import BioTag, Corpus, extract_entities
from cce.errors import CceError


class AlignmentError(CceError):
    """Gold and predicted corpora whose sentences/tokens do not line up."""


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    micro_f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EvalReport":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(tp, fp, fn, precision, recall, f1)


def _check_alignment(gold: Corpus, pred: Corpus) -> None:
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold sentences vs {len(pred)} predicted")
    for i, (g, p) in enumerate(zip(gold, pred)):
        if g.texts != p.texts:
            raise AlignmentError(f"sentence {i}: token texts differ")


def micro_f1(gold: Corpus, pred: Corpus, level: str = "span") -> EvalReport:
    """Pooled precision/recall/F1 of pred against gold."""
    if level not in ("span", "token"):
        raise ValueError(f"level must be 'span' or 'token': {level!r}")
    _check_alignment(gold, pred)
    tp = fp = fn = 0
    if level == "span":
        for g, p in zip(gold, pred):
            gold_spans = {(s.start, s.end) for s in extract_entities(g)}
            pred_spans = {(s.start, s.end) for s in extract_entities(p)}
            tp += len(gold_spans & pred_spans)
            fp += len(pred_spans - gold_spans)
            fn += len(gold_spans - pred_spans)
    else:
        for g, p in zip(gold, pred):
            for gold_tag, pred_tag in zip(g.tags, p.tags):
                for cls in (BioTag.B, BioTag.I):
                    if gold_tag is cls and pred_tag is cls:
                        tp += 1
                    elif pred_tag is cls:
                        fp += 1
                    elif gold_tag is cls:
                        fn += 1
    return EvalReport.from_counts(tp, fp, fn)


def token_accuracy(gold: Corpus, pred: Corpus) -> float:
    """Fraction of tokens whose predicted tag equals the gold tag."""
    _check_alignment(gold, pred)
    total = correct = 0
    for g, p in zip(gold, pred):
        total += len(g)
        correct += sum(1 for a, b in zip(g.tags, p.tags) if a is b)
    return correct / total if total else 0.0
