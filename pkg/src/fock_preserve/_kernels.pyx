# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: line restrictions of polynomials and Ising energies."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def line_restrict_batch(const cnp.int64_t[:, ::1] exps not None,
                        const double complex[::1] coeffs not None,
                        const double[:, ::1] A not None,
                        const double[:, ::1] V not None):
    """Coefficients of ``t -> P(a + t v)`` for every row ``(a, v)`` of ``(A, V)``.

    Returns an array of shape ``(trials, deg + 1)`` in ascending powers of t,
    where ``deg`` is the total degree of P.
    """
    cdef Py_ssize_t nterms = exps.shape[0]
    cdef Py_ssize_t n = exps.shape[1]
    cdef Py_ssize_t trials = A.shape[0]
    if A.shape[1] != n or V.shape[1] != n or V.shape[0] != trials or coeffs.shape[0] != nterms:
        raise ValueError("shape mismatch between exponents, coefficients and lines")
    cdef Py_ssize_t deg = 0, maxe = 0, s, i, j, k, e, q, cur, tr
    for i in range(nterms):
        s = 0
        for j in range(n):
            s += exps[i, j]
            if exps[i, j] > maxe:
                maxe = exps[i, j]
        if s > deg:
            deg = s
    out_arr = np.zeros((trials, deg + 1), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t width = maxe + 1
    # binom[e, k]
    cdef double *binom = <double *> malloc(width * width * sizeof(double))
    # table[j, e, k]: coefficient of t^k in (a_j + v_j t)^e
    cdef double *table = <double *> malloc(n * width * width * sizeof(double))
    cdef double *apow = <double *> malloc(width * sizeof(double))
    cdef double *vpow = <double *> malloc(width * sizeof(double))
    cdef double complex *acc = <double complex *> malloc((deg + 1) * sizeof(double complex))
    cdef double complex *tmp = <double complex *> malloc((deg + 1) * sizeof(double complex))
    if not (binom and table and apow and vpow and acc and tmp):
        free(binom); free(table); free(apow); free(vpow); free(acc); free(tmp)
        raise MemoryError()
    cdef double a, v, b
    try:
        for e in range(width):
            binom[e * width] = 1.0
            for k in range(1, width):
                if k > e:
                    binom[e * width + k] = 0.0
                else:
                    binom[e * width + k] = binom[(e - 1) * width + k - 1] + (binom[(e - 1) * width + k] if k <= e - 1 else 0.0)
        for tr in range(trials):
            for j in range(n):
                a = A[tr, j]
                v = V[tr, j]
                apow[0] = 1.0
                vpow[0] = 1.0
                for e in range(1, width):
                    apow[e] = apow[e - 1] * a
                    vpow[e] = vpow[e - 1] * v
                for e in range(width):
                    for k in range(width):
                        if k <= e:
                            table[(j * width + e) * width + k] = binom[e * width + k] * apow[e - k] * vpow[k]
                        else:
                            table[(j * width + e) * width + k] = 0.0
            for i in range(nterms):
                acc[0] = coeffs[i]
                cur = 0
                for j in range(n):
                    e = exps[i, j]
                    if e == 0:
                        continue
                    for k in range(cur + e + 1):
                        tmp[k] = 0.0
                    for k in range(cur + 1):
                        for q in range(e + 1):
                            b = table[(j * width + e) * width + q]
                            tmp[k + q] = tmp[k + q] + acc[k] * b
                    cur += e
                    for k in range(cur + 1):
                        acc[k] = tmp[k]
                for k in range(cur + 1):
                    out[tr, k] = out[tr, k] + acc[k]
    finally:
        free(binom); free(table); free(apow); free(vpow); free(acc); free(tmp)
    return out_arr


def ising_energies(const double[:, ::1] J not None):
    """``sigma^T J sigma`` for all ``2**n`` spin configurations.

    Configuration ``s`` has ``sigma_j = +1`` when bit ``j`` of ``s`` is set
    and ``-1`` otherwise.
    """
    cdef Py_ssize_t n = J.shape[0]
    if J.shape[1] != n:
        raise ValueError("J must be square")
    if n > 30:
        raise ValueError("too many sites for exact enumeration")
    cdef Py_ssize_t total = (<Py_ssize_t> 1) << n
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double diag = 0.0, e, row
    cdef Py_ssize_t s, i, j
    cdef int si, sj
    for i in range(n):
        diag += J[i, i]
    for s in range(total):
        e = 0.0
        for i in range(n):
            si = 1 if (s >> i) & 1 else -1
            row = 0.0
            for j in range(i + 1, n):
                sj = 1 if (s >> j) & 1 else -1
                row += J[i, j] * sj
            e += si * row
        out[s] = diag + 2.0 * e
    return out_arr
