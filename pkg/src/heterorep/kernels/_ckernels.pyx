# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels.

Mirrors kernels/pure.py operation-for-operation; any arithmetic change must
land in both files.
"""

from libc.math cimport exp, fabs, pow

import numpy as np

cimport numpy as cnp

cnp.import_array()

LOSS_LOG = 0
LOSS_HINGE = 1


def scan_ngrams(list tokens, dict table, int max_n=3):
    """All dictionary hits among contiguous 1..max_n-grams (scan order)."""
    cdef int n_tok = len(tokens)
    cdef int start, n, limit
    cdef list out = []
    cdef object gram, ent
    for start in range(n_tok):
        limit = max_n if max_n < n_tok - start else n_tok - start
        gram = tokens[start]
        for n in range(1, limit + 1):
            if n > 1:
                gram = gram + " " + tokens[start + n - 1]
            ent = table.get(gram)
            if ent is not None:
                out.append((start, n, ent))
    return out


def sgd_epoch(double[:, ::1] X, double[::1] y, double[::1] w, double b,
              long long[::1] order, long long t, int loss, double alpha,
              double l1_ratio, double eta0, double power_t):
    """One epoch of per-sample elastic-net updates; see the pure twin for docs."""
    cdef double l2 = alpha * (1.0 - l1_ratio)
    cdef double l1 = alpha * l1_ratio
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t d = w.shape[0]
    cdef Py_ssize_t k, j
    cdef long long i
    cdef double eta, score, yi, z, e, gcoef, thr, v, a

    for k in range(n):
        i = order[k]
        eta = eta0 / pow(<double> t, power_t)
        score = b
        for j in range(d):
            score += w[j] * X[i, j]
        yi = y[i]
        z = yi * score
        if loss == 0:
            if z > 0.0:
                e = exp(-z)
                gcoef = -yi * (e / (1.0 + e))
            else:
                gcoef = -yi / (1.0 + exp(z))
        else:
            gcoef = -yi if z < 1.0 else 0.0
        for j in range(d):
            w[j] = w[j] - eta * (gcoef * X[i, j] + l2 * w[j])
        b = b - eta * gcoef
        if l1 > 0.0:
            thr = eta * l1
            for j in range(d):
                v = w[j]
                a = fabs(v) - thr
                if a > 0.0:
                    w[j] = a if v > 0.0 else -a
                else:
                    w[j] = 0.0
        t += 1
    return b, t
