"""Linear-chain CRF over BIO tags: scoring, partition, decoding, gradients.

A tag sequence's score is the sum of n+1 transition potentials (virtual
START before the first tag, STOP after the last) and n emission scores;
its probability is the global softmax over all k^n sequences.  The
transition matrix is (k+2)x(k+2) with START = row k and STOP = column
k+1; entries into START and out of STOP are frozen at -inf and never
touched by the recursions.
"""

from __future__ import annotations

import numpy as np

from cce import kernels

K = 3  # B, I, O
START = K
STOP = K + 1


def sequence_score(P: np.ndarray, A: np.ndarray, y) -> float:
    """Eq.-style path score: START->y_1, adjacent transitions, y_n->STOP,
    plus per-token emissions."""
    y = np.asarray(y, dtype=np.int64)
    n = P.shape[0]
    if len(y) != n:
        raise ValueError(f"{len(y)} tags for {n} tokens")
    total = A[START, y[0]] + A[y[-1], STOP]
    for t in range(n - 1):
        total += A[y[t], y[t + 1]]
    for t in range(n):
        total += P[t, y[t]]
    return float(total)


def log_partition(P: np.ndarray, A: np.ndarray) -> float:
    """log sum over all tag sequences of exp(score), via the forward
    recursion in log space."""
    log_z, _ = kernels.crf_forward(P, A)
    return float(log_z)


def log_likelihood(P: np.ndarray, A: np.ndarray, y) -> float:
    return sequence_score(P, A, y) - log_partition(P, A)


def viterbi(P: np.ndarray, A: np.ndarray) -> tuple[np.ndarray, float]:
    """Highest-scoring tag sequence and its score; argmax ties resolve to
    the lowest tag index at every backpointer decision."""
    path, score = kernels.viterbi(P, A)
    return np.asarray(path), float(score)


def nll_and_gradients(
    P: np.ndarray, A: np.ndarray, y
) -> tuple[float, np.ndarray, np.ndarray]:
    """Negative log-likelihood of y with its exact gradients (dP, dA).

    Gradients are expected feature counts under the model minus observed
    counts, from the forward-backward marginals.  dA stays zero on the
    frozen -inf entries.
    """
    y = np.asarray(y, dtype=np.int64)
    n, k = P.shape
    log_z, alpha = kernels.crf_forward(P, A)
    beta = kernels.crf_backward(P, A)

    marginals = np.exp(alpha + beta - log_z)
    dP = marginals.copy()
    dP[np.arange(n), y] -= 1.0

    dA = np.zeros_like(A)
    if n > 1:
        pair = np.exp(
            alpha[:-1, :, None]
            + A[None, :k, :k]
            + (P[1:] + beta[1:])[:, None, :]
            - log_z
        )
        dA[:k, :k] = pair.sum(axis=0)
        np.subtract.at(dA, (y[:-1], y[1:]), 1.0)
    dA[START, :k] += marginals[0]
    dA[START, y[0]] -= 1.0
    dA[:k, STOP] += marginals[-1]
    dA[y[-1], STOP] -= 1.0

    nll = log_z - sequence_score(P, A, y)
    return float(nll), dP, dA
