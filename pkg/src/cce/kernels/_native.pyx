# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: LSTM sequence passes and CRF dynamic programs.

Same contracts as cce.kernels._reference (the authoritative description);
inputs must be C-contiguous float64 arrays.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, tanh

cnp.import_array()


cdef inline double _sigmoid(double z) noexcept nogil:
    return 0.5 * (1.0 + tanh(0.5 * z))


def lstm_forward(double[:, ::1] X, double[:, ::1] Wx, double[:, ::1] Wh, double[::1] b):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t h = Wh.shape[0]
    cdef Py_ssize_t t, j, p

    H_arr = np.empty((n, h))
    I_arr = np.empty((n, h))
    F_arr = np.empty((n, h))
    O_arr = np.empty((n, h))
    G_arr = np.empty((n, h))
    C_arr = np.empty((n, h))
    TC_arr = np.empty((n, h))
    z_arr = np.empty(4 * h)
    prev_arr = np.zeros(h)
    cprev_arr = np.zeros(h)

    cdef double[:, ::1] H = H_arr
    cdef double[:, ::1] I = I_arr
    cdef double[:, ::1] F = F_arr
    cdef double[:, ::1] O = O_arr
    cdef double[:, ::1] G = G_arr
    cdef double[:, ::1] C = C_arr
    cdef double[:, ::1] TC = TC_arr
    cdef double[::1] z = z_arr
    cdef double[::1] h_prev = prev_arr
    cdef double[::1] c_prev = cprev_arr
    cdef double value, gi, gf, go, gg, cell

    with nogil:
        for t in range(n):
            for j in range(4 * h):
                z[j] = b[j]
            for p in range(d):
                value = X[t, p]
                for j in range(4 * h):
                    z[j] += value * Wx[p, j]
            for p in range(h):
                value = h_prev[p]
                for j in range(4 * h):
                    z[j] += value * Wh[p, j]
            for j in range(h):
                gi = _sigmoid(z[j])
                gf = _sigmoid(z[h + j])
                go = _sigmoid(z[2 * h + j])
                gg = tanh(z[3 * h + j])
                cell = gf * c_prev[j] + gi * gg
                I[t, j] = gi
                F[t, j] = gf
                O[t, j] = go
                G[t, j] = gg
                C[t, j] = cell
                TC[t, j] = tanh(cell)
                H[t, j] = go * TC[t, j]
            for j in range(h):
                h_prev[j] = H[t, j]
                c_prev[j] = C[t, j]
    return H_arr, I_arr, F_arr, O_arr, G_arr, C_arr, TC_arr


def lstm_backward(
    double[:, ::1] X,
    double[:, ::1] Wx,
    double[:, ::1] Wh,
    double[:, ::1] H,
    double[:, ::1] I,
    double[:, ::1] F,
    double[:, ::1] O,
    double[:, ::1] G,
    double[:, ::1] C,
    double[:, ::1] TC,
    double[:, ::1] dH,
):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t h = Wh.shape[0]
    cdef Py_ssize_t t, j, p

    dWx_arr = np.zeros((d, 4 * h))
    dWh_arr = np.zeros((h, 4 * h))
    db_arr = np.zeros(4 * h)
    dz_arr = np.empty(4 * h)
    dh_next_arr = np.zeros(h)
    dc_next_arr = np.zeros(h)

    cdef double[:, ::1] dWx = dWx_arr
    cdef double[:, ::1] dWh = dWh_arr
    cdef double[::1] db = db_arr
    cdef double[::1] dz = dz_arr
    cdef double[::1] dh_next = dh_next_arr
    cdef double[::1] dc_next = dc_next_arr
    cdef double dh, dc, do, c_prev, h_prev, value, gi, gf, go, gg, tc

    with nogil:
        for t in range(n - 1, -1, -1):
            for j in range(h):
                gi = I[t, j]
                gf = F[t, j]
                go = O[t, j]
                gg = G[t, j]
                tc = TC[t, j]
                dh = dH[t, j] + dh_next[j]
                do = dh * tc
                dc = dh * go * (1.0 - tc * tc) + dc_next[j]
                c_prev = C[t - 1, j] if t > 0 else 0.0
                dz[j] = dc * gg * gi * (1.0 - gi)
                dz[h + j] = dc * c_prev * gf * (1.0 - gf)
                dz[2 * h + j] = do * go * (1.0 - go)
                dz[3 * h + j] = dc * gi * (1.0 - gg * gg)
                dc_next[j] = dc * gf
            for p in range(d):
                value = X[t, p]
                for j in range(4 * h):
                    dWx[p, j] += value * dz[j]
            for p in range(h):
                h_prev = H[t - 1, p] if t > 0 else 0.0
                for j in range(4 * h):
                    dWh[p, j] += h_prev * dz[j]
            for j in range(4 * h):
                db[j] += dz[j]
            for p in range(h):
                value = 0.0
                for j in range(4 * h):
                    value += dz[j] * Wh[p, j]
                dh_next[p] = value
    return dWx_arr, dWh_arr, db_arr


def crf_forward(double[:, ::1] P, double[:, ::1] A):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t k = P.shape[1]
    cdef Py_ssize_t start = k
    cdef Py_ssize_t stop = k + 1
    cdef Py_ssize_t t, i, j

    alpha_arr = np.empty((n, k))
    cdef double[:, ::1] alpha = alpha_arr
    cdef double peak, total, value, log_z

    with nogil:
        for j in range(k):
            alpha[0, j] = A[start, j] + P[0, j]
        for t in range(1, n):
            for j in range(k):
                peak = alpha[t - 1, 0] + A[0, j]
                for i in range(1, k):
                    value = alpha[t - 1, i] + A[i, j]
                    if value > peak:
                        peak = value
                total = 0.0
                for i in range(k):
                    total += exp(alpha[t - 1, i] + A[i, j] - peak)
                alpha[t, j] = peak + log(total) + P[t, j]
        peak = alpha[n - 1, 0] + A[0, stop]
        for j in range(1, k):
            value = alpha[n - 1, j] + A[j, stop]
            if value > peak:
                peak = value
        total = 0.0
        for j in range(k):
            total += exp(alpha[n - 1, j] + A[j, stop] - peak)
        log_z = peak + log(total)
    return log_z, alpha_arr


def crf_backward(double[:, ::1] P, double[:, ::1] A):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t k = P.shape[1]
    cdef Py_ssize_t stop = k + 1
    cdef Py_ssize_t t, i, j

    beta_arr = np.empty((n, k))
    cdef double[:, ::1] beta = beta_arr
    cdef double peak, total, value

    with nogil:
        for i in range(k):
            beta[n - 1, i] = A[i, stop]
        for t in range(n - 2, -1, -1):
            for i in range(k):
                peak = A[i, 0] + P[t + 1, 0] + beta[t + 1, 0]
                for j in range(1, k):
                    value = A[i, j] + P[t + 1, j] + beta[t + 1, j]
                    if value > peak:
                        peak = value
                total = 0.0
                for j in range(k):
                    total += exp(A[i, j] + P[t + 1, j] + beta[t + 1, j] - peak)
                beta[t, i] = peak + log(total)
    return beta_arr


def viterbi(double[:, ::1] P, double[:, ::1] A):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t k = P.shape[1]
    cdef Py_ssize_t start = k
    cdef Py_ssize_t stop = k + 1
    cdef Py_ssize_t t, i, j, arg

    delta_arr = np.empty((n, k))
    back_arr = np.zeros((n, k), dtype=np.int64)
    path_arr = np.empty(n, dtype=np.int64)
    cdef double[:, ::1] delta = delta_arr
    cdef cnp.int64_t[:, ::1] back = back_arr
    cdef cnp.int64_t[::1] path = path_arr
    cdef double best, value, score

    with nogil:
        for j in range(k):
            delta[0, j] = A[start, j] + P[0, j]
        for t in range(1, n):
            for j in range(k):
                arg = 0
                best = delta[t - 1, 0] + A[0, j]
                for i in range(1, k):
                    value = delta[t - 1, i] + A[i, j]
                    if value > best:
                        best = value
                        arg = i
                back[t, j] = arg
                delta[t, j] = best + P[t, j]
        arg = 0
        best = delta[n - 1, 0] + A[0, stop]
        for j in range(1, k):
            value = delta[n - 1, j] + A[j, stop]
            if value > best:
                best = value
                arg = j
        score = best
        path[n - 1] = arg
        for t in range(n - 1, 0, -1):
            path[t - 1] = back[t, path[t]]
    return path_arr, score
