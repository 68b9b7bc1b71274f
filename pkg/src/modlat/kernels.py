"""Row-reduction kernels over a prime field.

Every kernel exists twice: a loop version compiled with numba and a
vectorised pure-numpy version. ``rref_kernel`` and ``rank_batch`` dispatch
to one of them according to ``modlat._jit.USE_NUMBA``; both variants stay
importable so they can be cross-checked and benchmarked.

Inputs are ``int64`` arrays with entries already reduced into ``[0, q)``.
With ``q < 2**31`` every intermediate product is below ``2**62``.
"""
from __future__ import annotations

import numpy as np

from ._jit import USE_NUMBA, optional_njit


def _inv_mod_py(a, q):
    # extended Euclid; a is nonzero mod prime q
    t, new_t = 0, 1
    r, new_r = q, a
    while new_r != 0:
        quot = r // new_r
        t, new_t = new_t, t - quot * new_t
        r, new_r = new_r, r - quot * new_r
    if t < 0:
        t += q
    return t


def _rref_loop(A, q):
    m, n = A.shape
    R = A.copy()
    pivots = np.empty(min(m, n), dtype=np.int64)
    rank = 0
    for col in range(n):
        if rank == m:
            break
        piv = -1
        for i in range(rank, m):
            if R[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(n):
                tmp = R[rank, j]
                R[rank, j] = R[piv, j]
                R[piv, j] = tmp
        inv = _inv_mod(R[rank, col], q)
        if inv != 1:
            for j in range(col, n):
                R[rank, j] = (R[rank, j] * inv) % q
        for i in range(m):
            if i == rank:
                continue
            f = R[i, col]
            if f == 0:
                continue
            g = q - f
            for j in range(col, n):
                R[i, j] = (R[i, j] + g * R[rank, j]) % q
        pivots[rank] = col
        rank += 1
    return R[:rank].copy(), rank, pivots[:rank].copy()


def _rank_batch_loop(A, q):
    b, m, n = A.shape
    out = np.zeros(b, dtype=np.int64)
    for k in range(b):
        R = A[k].copy()
        rank = 0
        for col in range(n):
            if rank == m:
                break
            piv = -1
            for i in range(rank, m):
                if R[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(col, n):
                    tmp = R[rank, j]
                    R[rank, j] = R[piv, j]
                    R[piv, j] = tmp
            inv = _inv_mod(R[rank, col], q)
            for i in range(rank + 1, m):
                f = R[i, col]
                if f == 0:
                    continue
                g = ((q - f) * inv) % q
                for j in range(col, n):
                    R[i, j] = (R[i, j] + g * R[rank, j]) % q
            rank += 1
        out[k] = rank
    return out


# the loop kernels only ever run compiled, so they call the jitted helper
_inv_mod = optional_njit(cache=True)(_inv_mod_py) or _inv_mod_py
rref_numba = optional_njit(cache=True)(_rref_loop)
rank_batch_numba = optional_njit(cache=True)(_rank_batch_loop)


def _inv_vec(x: np.ndarray, q: int) -> np.ndarray:
    """Elementwise inverse mod q via Fermat, for nonzero entries."""
    result = np.ones_like(x)
    base = x % q
    e = q - 2
    while e:
        if e & 1:
            result = (result * base) % q
        base = (base * base) % q
        e >>= 1
    return result


def rref_numpy(A: np.ndarray, q: int):
    R = np.array(A, dtype=np.int64, copy=True)
    m, n = R.shape
    pivots = []
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.flatnonzero(R[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            R[[rank, piv]] = R[[piv, rank]]
        inv = pow(int(R[rank, col]), -1, q)
        if inv != 1:
            R[rank] = (R[rank] * inv) % q
        f = R[:, col].copy()
        f[rank] = 0
        if f.any():
            R = (R + np.outer((q - f) % q, R[rank])) % q
        pivots.append(col)
        rank += 1
    return R[:rank].copy(), rank, np.array(pivots, dtype=np.int64)


def rank_batch_numpy(A: np.ndarray, q: int) -> np.ndarray:
    """Ranks of a stack of matrices, eliminating across the batch axis at once."""
    R = np.array(A, dtype=np.int64, copy=True)
    b, m, n = R.shape
    rank = np.zeros(b, dtype=np.int64)
    rows = np.arange(m)
    idx = np.arange(b)
    for col in range(n):
        live = rank < m
        if not live.any():
            break
        cand = (R[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1) & live
        if not has.any():
            continue
        sel = idx[has]
        r = rank[has]
        piv = cand[has].argmax(axis=1)
        top = R[sel, r].copy()
        R[sel, r] = R[sel, piv]
        R[sel, piv] = top
        prow = R[sel, r]
        inv = _inv_vec(prow[:, col], q)
        prow = (prow * inv[:, None]) % q
        f = R[sel, :, col]
        f = np.where(rows[None, :] > r[:, None], f, 0)
        R[sel] = (R[sel] + ((q - f) % q)[:, :, None] * prow[:, None, :]) % q
        rank[has] += 1
    return rank


def rref_kernel(A: np.ndarray, q: int):
    """Reduced row echelon form: ``(R, rank, pivots)`` with zero rows dropped."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64), 0, np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        R, rank, piv = rref_numba(A, q)
        return R, int(rank), piv
    return rref_numpy(A, q)


def rank_batch(A: np.ndarray, q: int) -> np.ndarray:
    """Rank of each matrix in an ``(batch, m, n)`` stack."""
    if A.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if A.shape[1] == 0 or A.shape[2] == 0:
        return np.zeros(A.shape[0], dtype=np.int64)
    if USE_NUMBA:
        return rank_batch_numba(A, q)
    return rank_batch_numpy(A, q)
