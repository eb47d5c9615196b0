import numpy as np
import pytest
from hypothesis import given, strategies as st

from abclosure import kernels

pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")

words = st.integers(1, 4).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(st.integers(0, k - 1), min_size=1, max_size=200)))


def brute_counts(w, k):
    out = np.zeros((len(w) + 1, k), dtype=np.int64)
    for i, a in enumerate(w):
        out[i + 1] = out[i]
        out[i + 1, a] += 1
    return out


@given(words)
def test_prefix_counts_and_corridor(data):
    k, w = data
    w = np.array(w, dtype=np.uint8)
    c = brute_counts(w, k)
    for impl in (kernels.py_, kernels.jit):
        assert np.array_equal(impl.prefix_counts(w, k), c)
    L = len(w)
    lo, hi = kernels.py_.corridor_profile(c, L)
    lo2, hi2 = kernels.jit.corridor_profile(c, L)
    assert np.array_equal(lo, lo2) and np.array_equal(hi, hi2)
    for n in range(1, L + 1):
        win = c[n:] - c[:-n]
        assert np.array_equal(lo[n], win.min(axis=0)) and np.array_equal(hi[n], win.max(axis=0))


@given(words, st.integers(1, 20))
def test_parikh_keys(data, n):
    k, w = data
    w = np.array(w, dtype=np.uint8)
    if n > len(w):
        return
    c = kernels.prefix_counts(w, k)
    base = n + 1
    expected = [sum(int(np.count_nonzero(w[i:i + n] == a)) * base ** a for a in range(k))
                for i in range(len(w) - n + 1)]
    for impl in (kernels.py_, kernels.jit):
        assert list(impl.parikh_keys(c, n, base)) == expected


@given(words)
def test_prefix_function(data):
    _, w = data
    w = np.array(w, dtype=np.uint8)
    expected = []
    for i in range(len(w)):
        s = w[:i + 1]
        expected.append(max(b for b in range(i + 1) if b == 0 or np.array_equal(s[:b], s[-b:])))
    for impl in (kernels.py_, kernels.jit):
        assert list(impl.prefix_function(w)) == expected


@given(words, st.integers(1, 12))
def test_distinct_factor_counts(data, L):
    _, w = data
    w = np.array(w, dtype=np.uint8)
    L = min(L, len(w))
    sa = kernels.suffix_array(w)
    assert sorted(range(len(w)), key=lambda i: tuple(w[i:])) == list(sa)
    expected = [1] + [len({tuple(w[i:i + n]) for i in range(len(w) - n + 1)}) for n in range(1, L + 1)]
    for impl in (kernels.py_, kernels.jit):
        lcp = impl.lcp_array(w, sa)
        assert list(impl.distinct_factor_counts(sa, lcp, len(w), L))[: L + 1] == expected


@given(st.lists(st.integers(0, 2), min_size=5, max_size=150), st.integers(1, 6))
def test_heavy_light_scan_flavours_agree(w, m):
    w = np.array(w, dtype=np.uint8)
    m = min(m, len(w))
    rng = np.random.default_rng(len(w))
    h1 = rng.integers(0, m + 1, size=m + 1).astype(np.int64)
    h2 = rng.integers(0, m + 1, size=m + 1).astype(np.int64)
    a = kernels.py_.heavy_light_scan(w, m, h1, h2)
    b = kernels.jit.heavy_light_scan(w, m, h1, h2)
    assert np.array_equal(a, b)


def test_fallback_selected_by_env(tmp_path):
    import subprocess
    import sys
    import os
    env = dict(os.environ, ABCLOSURE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from abclosure import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
