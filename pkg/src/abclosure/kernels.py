"""Hot window-scan kernels, each in a numba and a pure-numpy flavour.

Set ``ABCLOSURE_NO_NUMBA=1`` (or uninstall numba) to force the numpy path.
Both flavours are importable explicitly as ``kernels.jit`` and
``kernels.py_`` for cross-checking and benchmarking; the module-level names
point at whichever one is active.

Words are ``uint8`` arrays of letter indices.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

_DISABLED = os.environ.get("ABCLOSURE_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("disabled by ABCLOSURE_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# numpy flavour

def prefix_counts_np(word: np.ndarray, k: int) -> np.ndarray:
    """(len+1, k) array; row i holds the Parikh vector of word[:i]."""
    out = np.zeros((len(word) + 1, k), dtype=np.int64)
    if len(word):
        onehot = np.zeros((len(word), k), dtype=np.int64)
        onehot[np.arange(len(word)), word] = 1
        np.cumsum(onehot, axis=0, out=out[1:])
    return out


def parikh_keys_np(counts: np.ndarray, n: int, base: int) -> np.ndarray:
    """Mixed-radix integer key of the Parikh vector of every length-n window."""
    win = counts[n:] - counts[:-n] if n else np.zeros_like(counts)
    weights = base ** np.arange(counts.shape[1], dtype=np.int64)
    return win @ weights


def corridor_profile_np(counts: np.ndarray, max_len: int):
    """Per-length (min, max) letter counts over all windows, lengths 0..max_len."""
    k = counts.shape[1]
    mins = np.zeros((max_len + 1, k), dtype=np.int64)
    maxs = np.zeros((max_len + 1, k), dtype=np.int64)
    for n in range(1, max_len + 1):
        win = counts[n:] - counts[:-n]
        mins[n] = win.min(axis=0)
        maxs[n] = win.max(axis=0)
    return mins, maxs


def prefix_function_np(word: np.ndarray) -> np.ndarray:
    # KMP border array; inherently sequential, so plain Python here
    w = word.tolist()
    pi = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = pi[k - 1]
        if w[i] == w[k]:
            k += 1
        pi[i] = k
    return np.asarray(pi, dtype=np.int64)


def lcp_array_np(word: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """Kasai LCP: lcp[r] = lcp(suffix sa[r-1], suffix sa[r]); lcp[0] = 0."""
    n = len(word)
    w = word.tolist()
    rank = [0] * n
    for r, p in enumerate(sa.tolist()):
        rank[p] = r
    lcp = [0] * n
    h = 0
    sal = sa.tolist()
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sal[r - 1]
            while i + h < n and j + h < n and w[i + h] == w[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return np.asarray(lcp, dtype=np.int64)


def distinct_factor_counts_np(sa: np.ndarray, lcp: np.ndarray, n_total: int,
                              max_len: int) -> np.ndarray:
    """Number of distinct length-n factors for n = 0..max_len."""
    out = np.zeros(max_len + 1, dtype=np.int64)
    out[0] = 1
    suffix_len = n_total - sa
    for n in range(1, max_len + 1):
        idx = np.flatnonzero(suffix_len >= n)
        if len(idx) == 0:
            continue
        if len(idx) == 1:
            out[n] = 1
            continue
        # lcp of consecutive eligible suffixes = min of lcp over (idx[j], idx[j+1]]
        between = np.minimum.reduceat(lcp[: idx[-1] + 1], idx[:-1] + 1)
        out[n] = 1 + int(np.count_nonzero(between < n))
    return out


def heavy_light_scan_np(word: np.ndarray, max_len: int, heavy1: np.ndarray,
                        heavy2: np.ndarray):
    """For m = 1..max_len, which of the four heavy/light combinations occur.

    ``heavy1[m]`` / ``heavy2[m]`` are the heavy counts of letters 1 and 2 at
    length m.  Returns a bool array (max_len+1, 4) with columns
    (1-2-heavy, 1-2-light, 1-heavy-2-light, 2-heavy-1-light).
    """
    counts = prefix_counts_np(word, 3)
    out = np.zeros((max_len + 1, 4), dtype=np.bool_)
    for m in range(1, max_len + 1):
        win = counts[m:] - counts[:-m]
        h1 = win[:, 1] == heavy1[m]
        h2 = win[:, 2] == heavy2[m]
        out[m, 0] = np.any(h1 & h2)
        out[m, 1] = np.any(~h1 & ~h2)
        out[m, 2] = np.any(h1 & ~h2)
        out[m, 3] = np.any(~h1 & h2)
    return out


# ---------------------------------------------------------------------------
# numba flavour

@njit(cache=True)
def prefix_counts_jit(word, k):
    n = word.shape[0]
    out = np.zeros((n + 1, k), dtype=np.int64)
    for i in range(n):
        for a in range(k):
            out[i + 1, a] = out[i, a]
        out[i + 1, word[i]] += 1
    return out


@njit(cache=True)
def parikh_keys_jit(counts, n, base):
    m = counts.shape[0] - n
    k = counts.shape[1]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        key = 0
        w = 1
        for a in range(k):
            key += (counts[i + n, a] - counts[i, a]) * w
            w *= base
        out[i] = key
    return out


@njit(cache=True)
def corridor_profile_jit(counts, max_len):
    total = counts.shape[0]
    k = counts.shape[1]
    mins = np.zeros((max_len + 1, k), dtype=np.int64)
    maxs = np.zeros((max_len + 1, k), dtype=np.int64)
    for n in range(1, max_len + 1):
        for a in range(k):
            lo = counts[n, a] - counts[0, a]
            hi = lo
            for i in range(1, total - n):
                v = counts[i + n, a] - counts[i, a]
                if v < lo:
                    lo = v
                elif v > hi:
                    hi = v
            mins[n, a] = lo
            maxs[n, a] = hi
    return mins, maxs


@njit(cache=True)
def prefix_function_jit(word):
    n = word.shape[0]
    pi = np.zeros(n, dtype=np.int64)
    k = 0
    for i in range(1, n):
        while k > 0 and word[i] != word[k]:
            k = pi[k - 1]
        if word[i] == word[k]:
            k += 1
        pi[i] = k
    return pi


@njit(cache=True)
def lcp_array_jit(word, sa):
    n = word.shape[0]
    rank = np.empty(n, dtype=np.int64)
    for r in range(n):
        rank[sa[r]] = r
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and word[i + h] == word[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@njit(cache=True)
def distinct_factor_counts_jit(sa, lcp, n_total, max_len):
    out = np.zeros(max_len + 1, dtype=np.int64)
    out[0] = 1
    for n in range(1, max_len + 1):
        count = 0
        seen = False
        run_min = 0
        for r in range(sa.shape[0]):
            if seen and lcp[r] < run_min:
                run_min = lcp[r]
            if n_total - sa[r] >= n:
                if not seen or run_min < n:
                    count += 1
                seen = True
                run_min = 1 << 62
        out[n] = count
    return out


@njit(cache=True)
def heavy_light_scan_jit(word, max_len, heavy1, heavy2):
    counts = prefix_counts_jit(word, 3)
    total = counts.shape[0]
    out = np.zeros((max_len + 1, 4), dtype=np.bool_)
    for m in range(1, max_len + 1):
        for i in range(total - m):
            h1 = counts[i + m, 1] - counts[i, 1] == heavy1[m]
            h2 = counts[i + m, 2] - counts[i, 2] == heavy2[m]
            if h1 and h2:
                out[m, 0] = True
            elif not h1 and not h2:
                out[m, 1] = True
            elif h1:
                out[m, 2] = True
            else:
                out[m, 3] = True
    return out


# ---------------------------------------------------------------------------

def suffix_array(word: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling (numpy sorts; O(n log^2 n))."""
    n = len(word)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = word.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        diff = np.concatenate(([0], ((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])).astype(np.int64)))
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(diff)
        rank = new_rank
        if rank.max() == n - 1 or k >= n:
            return sa.astype(np.int64)
        k *= 2


py_ = SimpleNamespace(
    prefix_counts=prefix_counts_np,
    parikh_keys=parikh_keys_np,
    corridor_profile=corridor_profile_np,
    prefix_function=prefix_function_np,
    lcp_array=lcp_array_np,
    distinct_factor_counts=distinct_factor_counts_np,
    heavy_light_scan=heavy_light_scan_np,
)

jit = SimpleNamespace(
    prefix_counts=prefix_counts_jit,
    parikh_keys=parikh_keys_jit,
    corridor_profile=corridor_profile_jit,
    prefix_function=prefix_function_jit,
    lcp_array=lcp_array_jit,
    distinct_factor_counts=distinct_factor_counts_jit,
    heavy_light_scan=heavy_light_scan_jit,
)

active = jit if HAVE_NUMBA else py_
BACKEND = "numba" if HAVE_NUMBA else "numpy"

prefix_counts = active.prefix_counts
parikh_keys = active.parikh_keys
corridor_profile = active.corridor_profile
prefix_function = active.prefix_function
lcp_array = active.lcp_array
distinct_factor_counts = active.distinct_factor_counts
heavy_light_scan = active.heavy_light_scan


def warmup():
    """Compile the numba kernels on tiny inputs (no-op on the numpy path)."""
    w = np.array([0, 1, 2, 1, 0, 2], dtype=np.uint8)
    c = prefix_counts(w, 3)
    parikh_keys(c, 2, 7)
    corridor_profile(c, 3)
    prefix_function(w)
    sa = suffix_array(w)
    distinct_factor_counts(sa, lcp_array(w, sa), len(w), 3)
    h = np.ones(4, dtype=np.int64)
    heavy_light_scan(w, 3, h, h)
