"""BiLSTM emission network: parameters, forward pass, backward pass.

Two independent LSTMs (standard input/forget/output gates, tanh cell
candidate) run left-to-right and right-to-left over the embedded sentence;
their per-token hidden states are concatenated, optionally dropped out in
training mode, and projected to one score per tag.  Weight matrices are
initialized uniformly in +-1/sqrt(fan-in); biases start at zero except the
forget gate's, which starts at 1 so early cell states are retained.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cce import kernels
from cce.errors import CceError
from cce.tagger.crf import K, START, STOP


class DimensionMismatchError(CceError):
    """Input embedding width differs from the model's."""


@dataclass
class TaggerParams:
    """All learnable weights of the tagger.

    transitions is (K+2)x(K+2); its column into START and row out of STOP
    are fixed at -inf and excluded from learning.
    """

    dimension: int
    hidden: int
    fwd_wx: np.ndarray
    fwd_wh: np.ndarray
    fwd_b: np.ndarray
    bwd_wx: np.ndarray
    bwd_wh: np.ndarray
    bwd_b: np.ndarray
    out_w: np.ndarray
    out_b: np.ndarray
    transitions: np.ndarray

    @classmethod
    def init(cls, dimension: int, hidden: int, seed) -> "TaggerParams":
        """Seeded initialization; `seed` may be an int or a Generator."""
        if dimension <= 0 or hidden <= 0:
            raise ValueError(f"dimension and hidden must be positive: {dimension}, {hidden}")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

        def uniform(rows: int, cols: int) -> np.ndarray:
            limit = 1.0 / np.sqrt(rows)
            return rng.uniform(-limit, limit, size=(rows, cols))

        def gate_bias() -> np.ndarray:
            b = np.zeros(4 * hidden)
            b[hidden: 2 * hidden] = 1.0
            return b

        limit = 1.0 / np.sqrt(K + 2)
        transitions = rng.uniform(-limit, limit, size=(K + 2, K + 2))
        transitions[:, START] = -np.inf
        transitions[STOP, :] = -np.inf
        return cls(
            dimension=dimension,
            hidden=hidden,
            fwd_wx=uniform(dimension, 4 * hidden),
            fwd_wh=uniform(hidden, 4 * hidden),
            fwd_b=gate_bias(),
            bwd_wx=uniform(dimension, 4 * hidden),
            bwd_wh=uniform(hidden, 4 * hidden),
            bwd_b=gate_bias(),
            out_w=uniform(2 * hidden, K),
            out_b=np.zeros(K),
            transitions=transitions,
        )

    def tensors(self) -> dict[str, np.ndarray]:
        """Named weight tensors, in a fixed order used by SGD and model files."""
        return {
            "fwd_wx": self.fwd_wx,
            "fwd_wh": self.fwd_wh,
            "fwd_b": self.fwd_b,
            "bwd_wx": self.bwd_wx,
            "bwd_wh": self.bwd_wh,
            "bwd_b": self.bwd_b,
            "out_w": self.out_w,
            "out_b": self.out_b,
            "transitions": self.transitions,
        }

    def copy(self) -> "TaggerParams":
        return TaggerParams(
            dimension=self.dimension,
            hidden=self.hidden,
            **{name: tensor.copy() for name, tensor in self.tensors().items()},
        )


@dataclass
class ForwardCache:
    """Everything the backward pass needs from one sentence's forward pass."""

    X: np.ndarray
    X_rev: np.ndarray
    fwd: tuple
    bwd: tuple
    concat: np.ndarray  # post-dropout concatenated hidden states
    mask: np.ndarray | None
    P: np.ndarray


def forward(
    params: TaggerParams,
    X: np.ndarray,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> ForwardCache:
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != params.dimension:
        raise DimensionMismatchError(
            f"input has shape {X.shape}, model expects (n, {params.dimension})"
        )
    fwd = kernels.lstm_forward(X, params.fwd_wx, params.fwd_wh, params.fwd_b)
    X_rev = np.ascontiguousarray(X[::-1])
    bwd = kernels.lstm_forward(X_rev, params.bwd_wx, params.bwd_wh, params.bwd_b)
    concat = np.concatenate([fwd[0], bwd[0][::-1]], axis=1)
    mask = None
    if dropout > 0.0:
        if rng is None:
            raise ValueError("dropout requires an rng")
        mask = (rng.random(concat.shape) >= dropout) / (1.0 - dropout)
        concat = concat * mask
    P = concat @ params.out_w + params.out_b
    return ForwardCache(X=X, X_rev=X_rev, fwd=fwd, bwd=bwd, concat=concat, mask=mask, P=P)


def backward(params: TaggerParams, cache: ForwardCache, dP: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of all network weights given dLoss/dP; keys match tensors()."""
    h = params.hidden
    d_concat = dP @ params.out_w.T
    if cache.mask is not None:
        d_concat = d_concat * cache.mask
    d_fwd_h = np.ascontiguousarray(d_concat[:, :h])
    d_bwd_h = np.ascontiguousarray(d_concat[::-1, h:])
    fwd_grads = kernels.lstm_backward(
        cache.X, params.fwd_wx, params.fwd_wh, *cache.fwd, d_fwd_h
    )
    bwd_grads = kernels.lstm_backward(
        cache.X_rev, params.bwd_wx, params.bwd_wh, *cache.bwd, d_bwd_h
    )
    return {
        "fwd_wx": fwd_grads[0],
        "fwd_wh": fwd_grads[1],
        "fwd_b": fwd_grads[2],
        "bwd_wx": bwd_grads[0],
        "bwd_wh": bwd_grads[1],
        "bwd_b": bwd_grads[2],
        "out_w": cache.concat.T @ dP,
        "out_b": dP.sum(axis=0),
    }


def emissions(
    params: TaggerParams,
    X: np.ndarray,
    mode: str = "infer",
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Per-token tag scores, shape (n, K); dropout applies in train mode only."""
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer': {mode!r}")
    effective = dropout if mode == "train" else 0.0
    return forward(params, X, dropout=effective, rng=rng).P
