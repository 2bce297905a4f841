"""Dense linear algebra over GF(p) on int64 numpy arrays (p < 2**31)."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def echelon(mat: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * _inv(a[r, c], p) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(mat: np.ndarray, p: int) -> np.ndarray:
    return echelon(mat, p)[0]


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    m = np.asarray(mat)
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(echelon(m, p)[1])


def reduce_rows(mat: np.ndarray, reducer: np.ndarray, p: int) -> np.ndarray:
    """Reduce rows of ``mat`` modulo the row space of an RREF ``reducer``."""
    a = np.array(mat, dtype=np.int64) % p
    if reducer.shape[0] == 0 or a.shape[0] == 0:
        return a
    for row in reducer:
        c = int(np.nonzero(row)[0][0])
        f = a[:, c].copy()
        nz = np.nonzero(f)[0]
        if nz.size:
            a[nz] = (a[nz] - np.outer(f[nz], row)) % p
    return a


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{v : mat @ v = 0}``."""
    m = np.asarray(mat, dtype=np.int64)
    cols = m.shape[1]
    red, pivots = echelon(m, p) if m.shape[0] else (np.zeros((0, cols), dtype=np.int64), [])
    free = [c for c in range(cols) if c not in set(pivots)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, fcol in enumerate(free):
        out[i, fcol] = 1
        for r, pc in enumerate(pivots):
            out[i, pc] = (-red[r, fcol]) % p
    return out


def solve_in_span(basis: np.ndarray, target: np.ndarray, p: int) -> bool:
    """Whether ``target`` (a row) lies in the row span of ``basis``."""
    if basis.shape[0] == 0:
        return not np.any(np.asarray(target) % p)
    r0 = rank(basis, p)
    r1 = rank(np.vstack([basis, target]), p)
    return r0 == r1
