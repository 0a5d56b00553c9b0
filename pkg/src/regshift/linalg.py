"""Rank of matrices over F_p."""

import numpy as np


def rank_mod_p(rows, p: int) -> int:
    """Rank of an integer matrix (list of rows) modulo the prime p."""
    if not rows or not rows[0]:
        return 0
    # int64 products stay exact while p < 2**31
    a = np.array(rows, dtype=np.int64 if p < 2**31 else object) % p
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = a[rank] * inv % p
        below = a[rank + 1:, col]
        mask = np.nonzero(below)[0]
        if mask.size:
            idx = rank + 1 + mask
            a[idx] = (a[idx] - np.outer(a[idx, col], a[rank])) % p
        rank += 1
    return rank
