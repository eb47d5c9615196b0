import itertools
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from abclosure.exactnum import QuadExt
from abclosure.generators import (ArnouxRauzy, BinaryRotationSpec, BinaryRotationWord, Champernowne,
                                  DirectiveExhausted, Interleave, InterleaveSpec, MorphicImage, MorphismSpec,
                                  MorphicFixedPoint, Prepend, Shift, SpecError, TernaryRotationSpec,
                                  TernaryRotationWord, fibonacci, fm_min_complexity_word, is_constant_gap,
                                  letters_of_directive_ok, palindromic_closure, periodic, preperiodic,
                                  thue_morse, tribonacci)
from abclosure.words import factor_complexities

GOLD = QuadExt(Fraction(3, 2), Fraction(-1, 2), 5)  # (3 - sqrt5)/2
SQRT2M1 = QuadExt(-1, 1, 2)


def dec(x):
    return (Decimal(x.q0.numerator) / x.q0.denominator
            + Decimal(x.q1.numerator) / x.q1.denominator * Decimal(x.D or 0).sqrt())


def frac(v):
    return v - v.to_integral_value(rounding="ROUND_FLOOR")


def iterate_morphism(m, start, n):
    w = start
    while len(w) < n:
        w = "".join(m[c] for c in w)
    return w[:n]


def is_pal(s):
    return s == s[::-1]


def closure_oracle(w):
    for i in range(len(w) + 1):
        if is_pal(w[i:]):
            return w + w[:i][::-1]


def test_classic_fixed_points():
    assert thue_morse().render(2000) == "".join(str(bin(i).count("1") % 2) for i in range(2000))
    assert fibonacci().render(3000) == iterate_morphism({"0": "01", "1": "0"}, "0", 3000)
    assert tribonacci().render(3000) == iterate_morphism({"0": "01", "1": "02", "2": "0"}, "0", 3000)


def test_fibonacci_is_characteristic_rotation_word():
    a = dec(GOLD)
    oracle = "".join(str(int((n + 2) * a) - int((n + 1) * a)) for n in range(1000))
    assert fibonacci().render(1000) == oracle
    assert BinaryRotationWord(BinaryRotationSpec(GOLD, GOLD)).render(1000) == oracle


@given(st.integers(1, 10**6), st.sampled_from([GOLD, SQRT2M1, 1 - SQRT2M1]), st.sampled_from(["under", "bar"]))
def test_rotation_word_matches_decimal(k, alpha, conv):
    rho = QuadExt(Fraction(k, 10**6 + 1))
    word = BinaryRotationWord(BinaryRotationSpec(alpha, rho, conv)).render(300)
    a, r = dec(alpha), dec(rho)
    oracle = "".join("1" if frac(r + n * a) >= 1 - a else "0" for n in range(300))
    assert word == oracle  # rational rho never hits an irrational endpoint


def test_rotation_conventions_differ_only_at_endpoint():
    under = BinaryRotationWord(BinaryRotationSpec(GOLD, 1 - GOLD, "under")).render(50)
    bar = BinaryRotationWord(BinaryRotationSpec(GOLD, 1 - GOLD, "bar")).render(50)
    # the orbit meets 1 - alpha at n = 0 and 1 == 0 at n = 1
    assert under[:2] == "10" and bar[:2] == "01" and under[2:] == bar[2:]


@given(st.integers(1, 10**4), st.integers(0, 10**4))
def test_ternary_word_matches_decimal(kz, kr):
    alpha = SQRT2M1 / 2 + Fraction(1, 100)  # about 0.217
    a = dec(alpha)
    z = Decimal(kz) / 10**4 * (1 - 2 * a) + a
    zeta = QuadExt(Fraction(str(z.quantize(Decimal("1e-12")))))
    if zeta < alpha or zeta > 1 - alpha:
        return
    rho = QuadExt(Fraction(kr, 10**4 + 7))
    w = TernaryRotationWord(TernaryRotationSpec(alpha, zeta, rho)).render(200)
    zd, r = dec(zeta), dec(rho)
    out = []
    for n in range(200):
        p = frac(r + n * a)
        if 1 - a <= p < 1:
            out.append("1")
        elif zd - a <= p < zd:
            out.append("2")
        else:
            out.append("0")
    assert w == "".join(out)


def test_ternary_forbidden_endpoint_combinations():
    a = SQRT2M1 / 2
    with pytest.raises(SpecError):
        TernaryRotationSpec(a, a, one_in_j1=True, zeta_in_j2=False)
    with pytest.raises(SpecError):
        TernaryRotationSpec(a, 1 - a, one_in_j1=False, zeta_in_j2=True)
    with pytest.raises(SpecError):
        TernaryRotationSpec(a, a / 2)
    TernaryRotationSpec(a, a, one_in_j1=True, zeta_in_j2=True)


def test_periodic_prepend_shift():
    x = preperiodic("0011", "001101")
    assert x.render(16) == "0011001101001101"
    assert Shift(x, 4).render(12) == periodic("001101").render(12)
    assert Prepend("2", thue_morse()).render(5) == "20110"
    assert is_constant_gap(periodic("0102"), 100) and not is_constant_gap(periodic("0012"), 100)


def test_interleave_matches_brute_force():
    x = Interleave(InterleaveSpec(fibonacci(), periodic("0102"), periodic("ab")))
    fib = fibonacci().render(400)
    z0, z1, out, i0, i1 = "0102" * 200, "ab" * 200, [], 0, 0
    for c in fib:
        if c == "0":
            out.append(z0[i0]); i0 += 1
        else:
            out.append(z1[i1]); i1 += 1
    assert x.render(400) == "".join(out)
    assert x.render(20) == "0a10b2a01b02a0b10a2b"


@given(st.text(alphabet="abc", max_size=30))
def test_palindromic_closure(w):
    assert str(palindromic_closure(w)) == closure_oracle(w)


def test_arnoux_rauzy_is_iterated_closure():
    directive = "0120210112"
    w = ""
    for c in directive:
        w = closure_oracle(w + c)
    ar = ArnouxRauzy(preperiodic(directive, "012"))
    assert ar.render(len(w)) == w
    assert ArnouxRauzy(periodic("012")).render(2000) == tribonacci().render(2000)
    assert letters_of_directive_ok(periodic("012"))
    assert not letters_of_directive_ok(periodic("01"))


def test_arnoux_rauzy_directive_exhaustion():
    with pytest.raises(DirectiveExhausted):
        ArnouxRauzy(preperiodic("012", "0"), max_directive=64).render(5000)


@pytest.mark.parametrize("k", [2, 3])
def test_champernowne(k):
    parts, n = [], 1
    while sum(map(len, parts)) < 500:
        parts += ["".join(map(str, t)) for t in itertools.product(range(k), repeat=n)]
        n += 1
    assert Champernowne(k).render(500) == "".join(parts)[:500]


def test_morphic_image_and_prolongability():
    m = MorphismSpec({"0": "01", "1": "10"}, "0")
    assert MorphicFixedPoint(m).render(64) == thue_morse().render(64)
    img = MorphicImage(fibonacci(), {"0": "02", "1": "12"})
    assert img.render(12) == "".join({"0": "02", "1": "12"}[c] for c in fibonacci().render(6))
    with pytest.raises(SpecError):
        MorphicFixedPoint(MorphismSpec({"0": "10", "1": "01"}, "0"))


def test_fm_word_construction():
    x = fm_min_complexity_word("a", "b", "c", fibonacci())
    s = fibonacci().render(100)
    assert x.render(200) == "".join({"0": "ca", "1": "cb"}[c] for c in s)
    fc = factor_complexities(x, 20, 5000)
    assert [int(fc[n]) for n in range(2, 21)] == [n + 2 for n in range(2, 21)]
    with pytest.raises(SpecError):
        fm_min_complexity_word("a", "b", "", fibonacci())
    with pytest.raises(SpecError):
        fm_min_complexity_word("a", "a", "c", fibonacci())
