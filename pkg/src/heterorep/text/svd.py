"""Seeded randomized truncated SVD.

Range finding uses a Gaussian test matrix drawn from the given seed plus
subspace (power) iterations with QR re-orthonormalization, so the result is
deterministic for a fixed seed and accurate for the leading spectrum at the
sizes used here (matrices with a few thousand columns).
"""

from __future__ import annotations

import numpy as np


def randomized_svd(a, k: int, seed: int, n_iter: int = 10,
                   oversample: int = 10) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-``k`` singular triplets of ``a`` (dense ndarray or scipy sparse).

    Returns (u, s, vt) with s non-increasing and u/vt having orthonormal
    columns/rows.  Signs are fixed deterministically: the largest-magnitude
    entry of each right singular vector is made positive.
    """
    n, d = a.shape
    k_eff = min(k, n, d)
    if k_eff <= 0:
        raise ValueError("matrix has no rows or columns to decompose")
    p = min(d, k_eff + oversample)

    rng = np.random.Generator(np.random.PCG64(seed))
    omega = rng.standard_normal((d, p))
    q, _ = np.linalg.qr(a @ omega)
    for _ in range(n_iter):
        w, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ w)

    b = (a.T @ q).T  # == q.T @ a, works for sparse a
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub

    u = u[:, :k_eff]
    s = s[:k_eff]
    vt = vt[:k_eff]
    for j in range(k_eff):
        i = int(np.argmax(np.abs(vt[j])))
        if vt[j, i] < 0:
            vt[j] = -vt[j]
            u[:, j] = -u[:, j]
    return u, s, vt
