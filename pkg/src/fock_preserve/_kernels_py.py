"""Pure numpy versions of the compiled kernels (same signatures, same results)."""

from __future__ import annotations

from math import comb

import numpy as np


def line_restrict_batch(exps, coeffs, A, V):
    """Coefficients of ``t -> P(a + t v)`` for every row ``(a, v)`` of ``(A, V)``."""
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    A = np.asarray(A, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    nterms, n = exps.shape
    trials = A.shape[0]
    if A.shape[1] != n or V.shape != A.shape or coeffs.shape[0] != nterms:
        raise ValueError("shape mismatch between exponents, coefficients and lines")
    deg = int(exps.sum(axis=1).max()) if nterms else 0
    maxe = int(exps.max()) if exps.size else 0
    width = maxe + 1
    binom = np.array([[comb(e, k) for k in range(width)] for e in range(width)], dtype=np.float64)
    # table[tr, j, e, k] = C(e, k) a^(e-k) v^k
    k_idx = np.arange(width)
    e_idx = np.arange(width)[:, None]
    expo_a = np.clip(e_idx - k_idx, 0, None)
    apow = A[:, :, None, None] ** expo_a[None, None, :, :]
    vpow = V[:, :, None, None] ** k_idx[None, None, None, :]
    table = binom[None, None] * apow * vpow
    table[..., k_idx[None, :] > e_idx] = 0.0

    out = np.zeros((trials, deg + 1), dtype=np.complex128)
    for i in range(nterms):
        acc = np.zeros((trials, deg + 1), dtype=np.complex128)
        acc[:, 0] = coeffs[i]
        cur = 0
        for j in range(n):
            e = int(exps[i, j])
            if e == 0:
                continue
            tmp = np.zeros_like(acc)
            for q in range(e + 1):
                tmp[:, q:cur + q + 1] += acc[:, :cur + 1] * table[:, j, e, q][:, None]
            cur += e
            acc = tmp
        out += acc
    return out


def ising_energies(J):
    """``sigma^T J sigma`` for all ``2**n`` spin configurations (bit j set -> +1)."""
    J = np.asarray(J, dtype=np.float64)
    n = J.shape[0]
    if J.shape != (n, n):
        raise ValueError("J must be square")
    if n > 30:
        raise ValueError("too many sites for exact enumeration")
    total = 1 << n
    out = np.empty(total, dtype=np.float64)
    diag = float(np.trace(J))
    upper = np.triu(J, 1)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        s = np.arange(start, min(start + chunk, total), dtype=np.int64)
        sigma = np.where((s[:, None] >> np.arange(n)) & 1, 1.0, -1.0)
        out[start:start + len(s)] = diag + 2.0 * np.einsum("ki,ij,kj->k", sigma, upper, sigma)
    return out
