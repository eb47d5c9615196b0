import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from abclosure import closure as cl
from abclosure.exactnum import QuadExt
from abclosure.generators import (ArnouxRauzy, BinaryRotationSpec, BinaryRotationWord, TernaryRotationSpec,
                                  TernaryRotationWord, fibonacci, fm_min_complexity_word, periodic,
                                  preperiodic, thue_morse)

SQRT2M1 = QuadExt(-1, 1, 2)
GOLD = QuadExt(Fraction(3, 2), Fraction(-1, 2), 5)
blocks = st.text(alphabet="01", min_size=1, max_size=7)


def parikh_sets(s, L):
    return {n: {s[i:i + n].count("1") for i in range(len(s) - n + 1)} for n in range(1, L + 1)}


def brute_member(y, x, L):
    """y, x as binary strings: every factor count of y occurs among x's."""
    px, py = parikh_sets(x, L), parikh_sets(y, L)
    return all(py[n] <= px[n] for n in range(1, L + 1))


@given(blocks, blocks, st.integers(1, 12))
def test_membership_of_periodic_words_matches_brute_force(u, v, L):
    y, x = periodic(u), periodic(v)
    if len(set(u + v)) < 2 and set(u) != set(v):
        return  # differing unary alphabets
    ys, xs = y.render(400), x.render(400)
    try:
        got = cl.abelian_member(y, x, L, 400)
    except cl.AlphabetMismatch:
        assert not set(u) <= set(v)
        return
    assert got.member == brute_member(ys, xs, L)
    if not got.member:
        wit = got.witness
        assert ys[wit.position:wit.position + wit.length] == wit.factor
        assert wit.factor.count("1") not in parikh_sets(xs, wit.length)[wit.length]
        # no shorter witness exists
        assert brute_member(ys, xs, wit.length - 1) if wit.length > 1 else True


@given(blocks.filter(lambda b: set(b) == {"0", "1"}), blocks.filter(lambda b: set(b) == {"0", "1"}),
       st.integers(1, 20))
def test_corridor_criterion_matches_abelian_on_binary(u, v, L):
    y, x = periodic(u), periodic(v)
    a = cl.abelian_member(y, x, L, 300)
    b = cl.corridor_member(y, x, L, 300)
    assert a.member == b.member


def test_corridor_is_binary_only():
    with pytest.raises(cl.AlphabetMismatch, match="binary-only"):
        cl.corridor_member(periodic("012"), periodic("012"), 3, 50)


def test_alphabet_mismatch_is_reported():
    with pytest.raises(cl.AlphabetMismatch):
        cl.abelian_member(periodic("02"), thue_morse(), 4, 100)


def test_verdict_json_schema():
    v = cl.abelian_member(periodic("001"), fibonacci(), 8, 2000)
    d = v.to_dict()
    assert d["schema"] == 1 and d["result"] == cl.REJECTED and d["witness"]["length"] == 8
    assert v.to_json() == cl.abelian_member(periodic("001"), fibonacci(), 8, 2000).to_json()


def test_thue_morse_closure_examples():
    x = preperiodic("0011", "001101")
    assert cl.abelian_member(thue_morse(), x, 60, 4000).member
    assert cl.abelian_member(x, thue_morse(), 60, 4000).member
    # 0(01)^w and 1(10)^w style words share TM's abelian factors; (00101)^w does not
    assert cl.abelian_member(preperiodic("0", "01"), thue_morse(), 60, 4000).member
    v = cl.abelian_member(periodic("00101"), thue_morse(), 60, 4000)
    assert not v.member and v.witness.factor == "0010100"


def scan_kinds(s, m, alpha_float):
    """Which heavy/light combinations occur among the length-m factors (pure python)."""
    import math
    heavy = math.floor(m * alpha_float) + 1
    seen = set()
    for i in range(len(s) - m + 1):
        f = s[i:i + m]
        seen.add((f.count("1") == heavy, f.count("2") == heavy))
    return {"12heavy": (True, True) in seen, "12light": (False, False) in seen,
            "1heavy2light": (True, False) in seen, "2heavy1light": (False, True) in seen}


@given(st.integers(0, 200), st.integers(0, 50), st.booleans(), st.booleans())
def test_heavy_light_geometry_matches_scan(kz, kr, f1, f2):
    alpha = SQRT2M1
    zeta = alpha + (1 - 2 * alpha) * Fraction(kz, 200)
    if zeta == alpha and f1 and not f2 or zeta == 1 - alpha and not f1 and f2:
        return
    spec = TernaryRotationSpec(alpha, zeta, QuadExt(Fraction(kr, 51)), f1, f2)
    s = TernaryRotationWord(spec).render(6000)
    for m in range(1, 16):
        kinds = scan_kinds(s, m, float(alpha))
        for kind in cl.HL_KINDS:
            assert cl.exists_hl_factor(kind, spec, m).value == kinds[kind], (str(spec), m, kind)


def test_heavy_light_boundary_hit_and_miss():
    alpha = SQRT2M1
    # first m with 1/2 <= {-m alpha} < 1 - alpha, so zeta = 1 - mu is admissible and ||zeta|| = 1 - mu
    for m in range(2, 40):
        mu = (-m * alpha) - (-m * alpha).floor()
        if Fraction(1, 2) <= mu < 1 - alpha:
            break
    zeta = 1 - mu
    hit = TernaryRotationSpec(alpha, zeta, QuadExt(0), True, False)
    miss = TernaryRotationSpec(alpha, zeta, QuadExt(Fraction(1, 7)), True, False)
    r_hit = cl.exists_hl_factor("12heavy", hit, m)
    r_miss = cl.exists_hl_factor("12heavy", miss, m)
    assert r_hit.branch.startswith("boundary") and r_miss.branch == "boundary-miss"
    for spec, r in ((hit, r_hit), (miss, r_miss)):
        assert scan_kinds(TernaryRotationWord(spec).render(20000), m, float(alpha))["12heavy"] == r.value


def test_heavy_prefix_predicate_matches_prefix():
    for k in range(1, 40):
        rho = QuadExt(Fraction(k, 41))
        for conv in ("under", "bar"):
            spec = BinaryRotationSpec(GOLD, rho, conv)
            s = BinaryRotationWord(spec).render(30)
            for m in range(1, 30):
                heavy = (m * GOLD).floor() + 1
                assert cl.heavy_prefix_predicate(spec, m) == (s[:m].count("1") == heavy)


def test_offset_order():
    alpha = SQRT2M1
    lo = TernaryRotationSpec(alpha, Fraction(43, 100))
    hi = TernaryRotationSpec(alpha, Fraction(1, 2))
    r = cl.offset_order_member(hi, lo, 40, 20000)
    assert r.ok and r.forward.member and not r.backward.member
    m, f = r.witness_m, r.witness_factor
    heavy = (m * alpha).floor() + 1
    assert len(f) == m and f.count("1") != heavy and f.count("2") != heavy
    a = TernaryRotationWord(hi).render(20000)
    assert sorted(f) not in (sorted(a[i:i + m]) for i in range(len(a) - m + 1))
    mu = float((-m * alpha) - (-m * alpha).floor())
    assert 0.5 > mu > 0.43


def cyclic_orbits(block):
    n = len(block)
    return {min(block[i:] + block[:i] for i in range(n))}


@pytest.mark.parametrize("period", ["00011", "011", "0000011", "001011", "0112"])
def test_census_matches_exhaustive_search(period):
    z = periodic(period)
    rep = cl.periodic_census(z, 400)
    # oracle: every rotation class of blocks of length 2*n0, checked against z by brute force
    n0 = rep.n0
    zs = z.render(400)
    letters = sorted(set(period))
    found = set()
    for t in itertools.product(letters, repeat=n0):
        b = "".join(t)
        ys = (b * (400 // len(b) + 1))[:400]
        ok = all({tuple(ys[i:i + n].count(c) for c in letters) for i in range(len(ys) - n + 1)}
                 <= {tuple(zs[i:i + n].count(c) for c in letters) for i in range(len(zs) - n + 1)}
                 for n in range(1, 3 * n0))
        if ok:
            root = next(b[:d] for d in range(1, n0 + 1) if n0 % d == 0 and b[:d] * (n0 // d) == b)
            found |= cyclic_orbits(root)
    assert set(rep.representatives) == found


def test_blocks_decompose():
    d = cl.blocks_decompose("ab" + "cab" + "cb" + "c", "cab", "cb")
    assert d is not None and d.orientation == "forward"
    assert d.head + "".join(d.blocks) + d.tail == "abcabcbc"
    r = cl.blocks_decompose("bac" + "bc", "cab", "cb")
    assert r is not None and r.orientation == "reversed"
    assert cl.blocks_decompose("aa", "cab", "cb") is None


def test_fm_mutants_are_rejected_and_reversal_accepted():
    u = fm_min_complexity_word("a", "b", "dc", fibonacci())
    rep = cl.minimal_subshift_probe_4letter(u, 24, 8000)
    assert rep.ok


def test_ar_probe_finds_absent_factor():
    r = cl.ar_closure_probe(ArnouxRauzy(periodic("012")), 50, 1000)
    assert r.member and r.absent_factor == "200"
