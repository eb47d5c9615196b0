from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from abclosure.generators import FromFinite, fibonacci, periodic, thue_morse
from abclosure.words import (AbelianIndex, Alphabet, FiniteWord, WindowError, abelian_complexity,
                             abelian_equiv, corridor, factor_complexities, factor_set, freq_bounds,
                             is_balanced, is_periodic_window, parikh, stabilized_index)

texts = st.text(alphabet="012", min_size=1, max_size=120)


def factors(s, n):
    return {s[i:i + n] for i in range(len(s) - n + 1)}


def parikhs(s, n, letters):
    return {tuple(f.count(c) for c in letters) for f in factors(s, n)}


def tm_oracle(n):
    return "".join(str(bin(i).count("1") % 2) for i in range(n))


def test_alphabet_roundtrip():
    a = Alphabet.of("ba0")
    assert a.names == ("0", "a", "b")
    assert a.render(a.encode("ab0ba")) == "ab0ba"
    with pytest.raises(ValueError):
        a.encode("c")
    u = a.union(Alphabet.of("1"))
    assert u.render(a.translate(a.encode("ab0"), u)) == "ab0"


@given(texts)
def test_finite_word_statistics(s):
    x = FiniteWord.from_str(s, Alphabet.of("012"))
    letters = "012"
    L = min(len(s), 12)
    fc = factor_complexities(x, L)
    for n in range(1, L + 1):
        assert abelian_complexity(x, n) == len(parikhs(s, n, letters))
        assert int(fc[n]) == len(factors(s, n))
        assert factor_set(x, n) == {bytes(int(c) for c in f) for f in factors(s, n)}
        for c in letters:
            counts = [f.count(c) for f in factors(s, n)]
            assert corridor(x, c, n) == (min(counts), max(counts))
    ok, wit = is_balanced(x, L)
    brute = all(max(f.count(c) for f in factors(s, n)) - min(f.count(c) for f in factors(s, n)) <= 1
                for n in range(1, L + 1) for c in letters)
    assert ok == brute
    if not ok:
        assert len(wit.light) == len(wit.heavy) == wit.n
        assert wit.heavy.count(wit.letter) - wit.light.count(wit.letter) >= 2


@given(texts, texts)
def test_abelian_equiv_is_sorted_equality(u, v):
    assert abelian_equiv(u, v) == (sorted(u) == sorted(v))
    assert sum(parikh(u, Alphabet.of("012"))) == len(u)


def test_window_errors():
    w = FiniteWord.from_str("0110")
    with pytest.raises(WindowError):
        FromFinite(w).prefix(5)
    assert FromFinite(w).render(4) == "0110"
    with pytest.raises(WindowError):
        abelian_complexity(w, 5)
    with pytest.raises(ValueError):
        abelian_complexity(thue_morse(), 3)  # infinite words need an explicit window


def test_thue_morse_prefix_and_index():
    x = thue_morse()
    assert x.render(12) == "011010011001"
    s = tm_oracle(4096)
    assert x.render(4096) == s
    idx = stabilized_index(x, 40)
    assert idx.stabilized
    for n in range(1, 41):
        assert idx.parikh_set(n) == parikhs(s, n, "01")


def test_index_exports_are_deterministic():
    idx = AbelianIndex.build(fibonacci(), 5, 500)
    assert idx.to_json() == AbelianIndex.build(fibonacci(), 5, 500).to_json()
    assert idx.to_csv().splitlines()[0] == "n,letter,min,max"
    assert len(idx.to_csv().splitlines()) == 1 + 5 * 2


def test_freq_bounds_and_periodicity():
    x = periodic("0011")
    assert freq_bounds(x, "1", 4, 100) == (Fraction(1, 2), Fraction(1, 2))
    assert is_periodic_window(x, 100) == 4
    assert is_periodic_window(fibonacci(), 1000) is None
