"""Exhaustive subset-maximisation kernels behind the computable bounds.

Two problems dominate the runtime of the library:

``pair_block_max``
    For a d x d complex Gram matrix ``G`` (``G[m, n] = <a_m|b_n>``) and sizes
    ``r, s``, the maximum over row subsets ``R`` (``|R| = r``) and column
    subsets ``S`` (``|S| = s``) of the largest eigenvalue of
    ``G[R, S] G[R, S]^dag``.  Its square root is the cosine of the smallest
    principal angle between the two spanned subspaces, and
    ``||P_R + P_S|| = 1 + sqrt(value)``.

``multi_tuple_max``
    For L stacks of positive operators and subset sizes ``s_1..s_L``, the
    maximum over all subset tuples of the largest eigenvalue of the summed
    operator.

Each has a numba kernel and a batched numpy kernel.  ``USE_NUMBA`` from
:mod:`uurel._accel` selects the default.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from ._accel import USE_NUMBA, njit

# entries per batched numpy eigen-solve chunk
_CHUNK = 1 << 13


@lru_cache(maxsize=256)
def combination_table(n: int, r: int) -> np.ndarray:
    """All r-subsets of range(n) in lexicographic order, shape (C(n, r), r)."""
    out = np.array(list(combinations(range(n), r)), dtype=np.int64)
    out.setflags(write=False)
    return out.reshape(comb(n, r), r)


def pair_count(d: int, r: int, s: int) -> int:
    return comb(d, r) * comb(d, s)


# ---------------------------------------------------------------- numba kernels


@njit
def _lambda_max_small(m, r):
    if r == 1:
        return m[0, 0].real
    if r == 2:
        a = m[0, 0].real
        c = m[1, 1].real
        b = m[0, 1]
        h = 0.5 * (a - c)
        return 0.5 * (a + c) + np.sqrt(h * h + b.real * b.real + b.imag * b.imag)
    return np.linalg.eigvalsh(m)[r - 1]


@njit
def _next_combination(idx, n):
    """Advance ``idx`` to the next combination in lexicographic order.

    Returns the leftmost changed position, or -1 when exhausted.
    """
    k = idx.shape[0]
    i = k - 1
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return -1
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return i


@njit
def _pair_block_max_nb(g, r, s):
    d = g.shape[0]
    best = -1.0
    best_rows = np.arange(r)
    best_cols = np.arange(s)
    rows = np.arange(r)
    outer = np.empty((d, r, r), dtype=np.complex128)
    partial = np.empty((s + 1, r, r), dtype=np.complex128)
    while True:
        for n in range(d):
            for i in range(r):
                gi = g[rows[i], n]
                for j in range(r):
                    outer[n, i, j] = gi * np.conj(g[rows[j], n])
        cols = np.arange(s)
        partial[0, :, :] = 0.0
        for t in range(s):
            partial[t + 1] = partial[t] + outer[cols[t]]
        while True:
            val = _lambda_max_small(partial[s], r)
            if val > best:
                best = val
                best_rows[:] = rows
                best_cols[:] = cols
            pos = _next_combination(cols, d)
            if pos < 0:
                break
            # nested subsets share the prefix sums up to the changed position
            for t in range(pos, s):
                partial[t + 1] = partial[t] + outer[cols[t]]
        if _next_combination(rows, d) < 0:
            break
    return best, best_rows, best_cols


@njit
def _multi_tuple_max_nb(stack, offsets, counts):
    """Max eigenvalue over the mixed-radix product of pre-summed operator stacks.

    ``stack[offsets[l] + i]`` is the i-th candidate operator of level l.
    """
    n_levels = counts.shape[0]
    d = stack.shape[1]
    idx = np.zeros(n_levels, dtype=np.int64)
    partial = np.zeros((n_levels + 1, d, d), dtype=np.complex128)
    for lv in range(n_levels):
        partial[lv + 1] = partial[lv] + stack[offsets[lv]]
    best = -1.0
    best_idx = idx.copy()
    while True:
        val = np.linalg.eigvalsh(partial[n_levels])[d - 1]
        if val > best:
            best = val
            best_idx[:] = idx
        lv = n_levels - 1
        while lv >= 0 and idx[lv] == counts[lv] - 1:
            idx[lv] = 0
            lv -= 1
        if lv < 0:
            break
        idx[lv] += 1
        for t in range(lv, n_levels):
            partial[t + 1] = partial[t] + stack[offsets[t] + idx[t]]
    return best, best_idx


# ---------------------------------------------------------------- numpy kernels


def _pair_block_max_np(g, r, s):
    d = g.shape[0]
    rows_tab = combination_table(d, r)
    cols_tab = combination_table(d, s)
    best, best_rows, best_cols = -1.0, None, None
    n_cols = cols_tab.shape[0]
    step = max(1, _CHUNK // max(n_cols, 1))
    for start in range(0, rows_tab.shape[0], step):
        rows = rows_tab[start : start + step]
        gr = g[rows]  # (nR, r, d)
        outer = gr[:, :, None, :] * gr[:, None, :, :].conj()  # (nR, r, r, d)
        summed = outer[..., cols_tab].sum(axis=-1)  # (nR, r, r, nS)
        summed = np.moveaxis(summed, -1, 1)  # (nR, nS, r, r)
        if r == 1:
            vals = summed[..., 0, 0].real
        else:
            vals = np.linalg.eigvalsh(summed)[..., -1]
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        if vals[i, j] > best:
            best = float(vals[i, j])
            best_rows = rows[i].copy()
            best_cols = cols_tab[j].copy()
    return best, best_rows, best_cols


def _multi_tuple_max_np(stacks):
    counts = [len(st) for st in stacks]
    best, best_flat = -1.0, 0
    d = stacks[0].shape[-1]
    first, rest = stacks[0], stacks[1:]
    tail = np.zeros((1, d, d), dtype=np.complex128)
    for st in rest:
        tail = (tail[:, None] + st[None, :]).reshape(-1, d, d)
    n_tail = tail.shape[0]
    step = max(1, _CHUNK // max(n_tail, 1))
    for start in range(0, counts[0], step):
        block = (first[start : start + step, None] + tail[None, :]).reshape(-1, d, d)
        vals = np.linalg.eigvalsh(block)[:, -1]
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_flat = start * n_tail + i
    return best, np.array(np.unravel_index(best_flat, counts), dtype=np.int64)


# ---------------------------------------------------------------- dispatch


def pair_block_max(g, r: int, s: int, use_numba: bool | None = None):
    """Return ``(value, rows, cols)`` maximising ``lambda_max(G[R,S] G[R,S]^dag)``."""
    g = np.ascontiguousarray(g, dtype=np.complex128)
    if r > s:
        val, cols, rows = pair_block_max(g.T, s, r, use_numba)
        return val, rows, cols
    if USE_NUMBA if use_numba is None else use_numba:
        val, rows, cols = _pair_block_max_nb(g, r, s)
        return float(val), rows, cols
    return _pair_block_max_np(g, r, s)


def multi_tuple_max(stacks, use_numba: bool | None = None):
    """Return ``(value, choice)`` maximising the top eigenvalue of ``sum_l stacks[l][choice[l]]``."""
    stacks = [np.ascontiguousarray(st, dtype=np.complex128) for st in stacks]
    if USE_NUMBA if use_numba is None else use_numba:
        counts = np.array([len(st) for st in stacks], dtype=np.int64)
        offsets = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        val, idx = _multi_tuple_max_nb(np.concatenate(stacks), offsets, counts)
        return float(val), idx
    return _multi_tuple_max_np(stacks)
