"""Compiled inner loops for large grids (enumeration and graded boundaries)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def _enumerate(w, bound, n, first_row):
    cap = 1024
    out = np.empty((cap, n), dtype=np.int8)
    count = 0
    used = np.zeros(n, dtype=np.bool_)
    sigma = np.zeros(n, dtype=np.int64)
    partial = np.zeros(n + 1, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)  # next row to try at each depth
    col = 0
    nxt[0] = 0
    while col >= 0:
        if col == n:
            if count == cap:
                cap *= 2
                grown = np.empty((cap, n), dtype=np.int8)
                grown[:count] = out[:count]
                out = grown
            for c in range(n):
                out[count, c] = sigma[c]
            count += 1
            col -= 1
            used[sigma[col]] = False
            continue
        r = nxt[col]
        advanced = False
        while r < n:
            if col == 0 and first_row >= 0 and r != first_row:
                r += 1
                continue
            if not used[r]:
                s = partial[col] + w[col, r]
                used[r] = True
                # cheapest completion over unused rows
                rest = 0
                for c in range(col + 1, n):
                    best = 1 << 40
                    for rr in range(n):
                        if not used[rr] and w[c, rr] < best:
                            best = w[c, rr]
                    rest += best
                if s + rest <= bound:
                    sigma[col] = r
                    partial[col + 1] = s
                    nxt[col] = r + 1
                    col += 1
                    nxt[col] = 0
                    advanced = True
                    break
                used[r] = False
            r += 1
        if not advanced:
            col -= 1
            if col >= 0:
                used[sigma[col]] = False
    return out[:count]


def enumerate_perms(w, bound, n, threads=1):
    """Permutations (lexicographic) with ``sum w[c, sigma[c]] <= bound``.

    With ``threads > 1`` the first column's row choices are farmed out to a
    thread pool; the kernel releases the GIL.
    """
    wc = np.ascontiguousarray(np.asarray(w, dtype=np.int64)[:n, :n])
    bound = np.int64(bound)
    if threads <= 1:
        return _enumerate(wc, bound, n, -1)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda r: _enumerate(wc, bound, n, r), range(n)))
    return np.concatenate(parts) if parts else np.empty((0, n), dtype=np.int8)


@numba.njit(cache=True, nogil=True)
def _lehmer(sigma, n, fact):
    code = 0
    for i in range(n):
        smaller = 0
        for j in range(i + 1, n):
            if sigma[j] < sigma[i]:
                smaller += 1
        code += smaller * fact[n - 1 - i]
    return code


@numba.njit(cache=True, nogil=True)
def _points_inside(sigma, n, c0, r0, w, h):
    for dc in range(1, w):
        k = (c0 + dc) % n
        d = (sigma[k] - r0) % n
        if d > 0 and d < h:
            return True
    return False


@numba.njit(cache=True, nogil=True)
def _graded_csr(perms, free, n):
    m = perms.shape[0]
    fact = np.ones(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        fact[k] = fact[k - 1] * k
    codes = np.empty(m, dtype=np.int64)
    for k in range(m):
        codes[k] = _lehmer(perms[k], n, fact)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    indptr = np.zeros(m + 1, dtype=np.int64)
    cap = max(16, 8 * m)
    indices = np.empty(cap, dtype=np.int64)
    nnz = 0
    sigma = np.empty(n, dtype=np.int64)
    for k in range(m):
        for c in range(n):
            sigma[c] = perms[k, c]
        for i in range(n - 1):
            for j in range(i + 1, n):
                si = sigma[i]
                sj = sigma[j]
                hits = 0
                wa = j - i
                ha = (sj - si) % n
                if free[i, wa, si, ha] and not _points_inside(sigma, n, i, si, wa, ha):
                    hits += 1
                wb = n - wa
                hb = (si - sj) % n
                if free[j, wb, sj, hb] and not _points_inside(sigma, n, j, sj, wb, hb):
                    hits += 1
                if hits == 1:
                    sigma[i] = sj
                    sigma[j] = si
                    code = _lehmer(sigma, n, fact)
                    sigma[i] = si
                    sigma[j] = sj
                    pos = np.searchsorted(sorted_codes, code)
                    if pos < m and sorted_codes[pos] == code:
                        if nnz == cap:
                            cap *= 2
                            grown = np.empty(cap, dtype=np.int64)
                            grown[:nnz] = indices[:nnz]
                            indices = grown
                        indices[nnz] = order[pos]
                        nnz += 1
        indptr[k + 1] = nnz
    return indptr, indices[:nnz]


def graded_differential(g, basis, table):
    """Graded boundary of every basis element, as lists of basis indices."""
    if not basis:
        return []
    perms = np.asarray(basis, dtype=np.int64)
    free = np.ascontiguousarray(table.free_xo)
    indptr, indices = _graded_csr(perms, free, g.n)
    idx = indices.tolist()
    ptr = indptr.tolist()
    return [idx[ptr[k] : ptr[k + 1]] for k in range(len(basis))]
