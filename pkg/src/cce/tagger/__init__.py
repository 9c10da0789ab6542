"""BiLSTM-CRF sequence tagger: emissions, CRF layer, training, inference."""

from cce.tagger.crf import (
    K,
    START,
    STOP,
    log_likelihood,
    log_partition,
    nll_and_gradients,
    sequence_score,
    viterbi,
)
from cce.tagger.model_io import MAGIC, ModelFormatError, load_model, save_model
from cce.tagger.network import DimensionMismatchError, TaggerParams, emissions
from cce.tagger.training import (
    EmptyQueryError,
    EpochRecord,
    TrainConfig,
    gradients,
    predict_corpus,
    tag,
    train,
)

__all__ = [
    "K",
    "MAGIC",
    "START",
    "STOP",
    "DimensionMismatchError",
    "EmptyQueryError",
    "EpochRecord",
    "ModelFormatError",
    "TaggerParams",
    "TrainConfig",
    "emissions",
    "gradients",
    "load_model",
    "log_likelihood",
    "log_partition",
    "nll_and_gradients",
    "predict_corpus",
    "save_model",
    "sequence_score",
    "tag",
    "train",
    "viterbi",
]
