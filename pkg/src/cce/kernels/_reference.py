"""Pure-numpy kernel implementations.

Fallback backend used when the compiled extension is unavailable; also the
reference the native kernels are tested against.  All arrays are float64.
Tag indices run 0..k-1; the transition matrix has two extra states,
START = k (row used for the first transition) and STOP = k + 1 (column
used for the last).
"""

from __future__ import annotations

import numpy as np


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # tanh form avoids exp overflow for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def lstm_forward(X, Wx, Wh, b):
    """Run one LSTM direction over a sequence.

    Returns (H, I, F, O, G, C, TC): hidden states plus the gate/cell
    activations per step, all shaped (n, h), as needed by the backward
    pass.  Gate order in the weight matrices is input, forget, output,
    cell candidate.
    """
    n = X.shape[0]
    h = Wh.shape[0]
    H = np.empty((n, h))
    I = np.empty((n, h))
    F = np.empty((n, h))
    O = np.empty((n, h))
    G = np.empty((n, h))
    C = np.empty((n, h))
    TC = np.empty((n, h))
    h_prev = np.zeros(h)
    c_prev = np.zeros(h)
    for t in range(n):
        z = X[t] @ Wx + h_prev @ Wh + b
        i = _sigmoid(z[:h])
        f = _sigmoid(z[h: 2 * h])
        o = _sigmoid(z[2 * h: 3 * h])
        g = np.tanh(z[3 * h:])
        c = f * c_prev + i * g
        tc = np.tanh(c)
        I[t], F[t], O[t], G[t], C[t], TC[t] = i, f, o, g, c, tc
        H[t] = o * tc
        h_prev = H[t]
        c_prev = c
    return H, I, F, O, G, C, TC


def lstm_backward(X, Wx, Wh, H, I, F, O, G, C, TC, dH):
    """Backpropagate dH (gradient w.r.t. every hidden state) through time.

    Returns (dWx, dWh, db).  Gradients w.r.t. the inputs are not needed
    (embeddings are fixed) and are not computed.
    """
    n = X.shape[0]
    h = Wh.shape[0]
    dWx = np.zeros_like(Wx)
    dWh = np.zeros_like(Wh)
    db = np.zeros(4 * h)
    dh_next = np.zeros(h)
    dc_next = np.zeros(h)
    zeros = np.zeros(h)
    dz = np.empty(4 * h)
    for t in range(n - 1, -1, -1):
        dh = dH[t] + dh_next
        i, f, o, g, tc = I[t], F[t], O[t], G[t], TC[t]
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        c_prev = C[t - 1] if t > 0 else zeros
        dz[:h] = dc * g * i * (1.0 - i)
        dz[h: 2 * h] = dc * c_prev * f * (1.0 - f)
        dz[2 * h: 3 * h] = do * o * (1.0 - o)
        dz[3 * h:] = dc * i * (1.0 - g * g)
        dc_next = dc * f
        h_prev = H[t - 1] if t > 0 else zeros
        dWx += np.outer(X[t], dz)
        dWh += np.outer(h_prev, dz)
        db += dz
        dh_next = dz @ Wh.T
    return dWx, dWh, db


def _logsumexp(values: np.ndarray, axis=None):
    peak = np.max(values, axis=axis, keepdims=True)
    out = peak + np.log(np.sum(np.exp(values - peak), axis=axis, keepdims=True))
    return out.reshape(()) if axis is None else np.squeeze(out, axis=axis)


def crf_forward(P, A):
    """Forward recursion in log space; returns (log_partition, alpha)."""
    n, k = P.shape
    start, stop = k, k + 1
    alpha = np.empty((n, k))
    alpha[0] = A[start, :k] + P[0]
    for t in range(1, n):
        alpha[t] = _logsumexp(alpha[t - 1][:, None] + A[:k, :k], axis=0) + P[t]
    log_z = float(_logsumexp(alpha[n - 1] + A[:k, stop]))
    return log_z, alpha


def crf_backward(P, A):
    """Backward recursion in log space; returns beta."""
    n, k = P.shape
    stop = k + 1
    beta = np.empty((n, k))
    beta[n - 1] = A[:k, stop]
    for t in range(n - 2, -1, -1):
        beta[t] = _logsumexp(A[:k, :k] + (P[t + 1] + beta[t + 1])[None, :], axis=1)
    return beta


def viterbi(P, A):
    """Best tag sequence and its score.

    Ties at every argmax resolve to the lowest tag index.
    """
    n, k = P.shape
    start, stop = k, k + 1
    delta = np.empty((n, k))
    back = np.zeros((n, k), dtype=np.int64)
    delta[0] = A[start, :k] + P[0]
    for t in range(1, n):
        scores = delta[t - 1][:, None] + A[:k, :k]
        back[t] = np.argmax(scores, axis=0)
        delta[t] = scores[back[t], np.arange(k)] + P[t]
    final = delta[n - 1] + A[:k, stop]
    path = np.empty(n, dtype=np.int64)
    path[n - 1] = int(np.argmax(final))
    for t in range(n - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path, float(final[path[n - 1]])
