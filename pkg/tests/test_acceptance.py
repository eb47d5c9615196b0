"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

The criteria run through ``abclosure.verify`` (the same code as
``abclosure verify``); where a value is cheap to recompute independently it is
checked again here against a direct oracle.
"""
import itertools

import pytest

from abclosure import verify as vf
from abclosure.generators import fibonacci, interleave, InterleaveSpec, periodic, thue_morse

_cache = {}


def result(n):
    if n not in _cache:
        _cache[n] = vf.CRITERIA[n]()
    return _cache[n]


@pytest.fixture
def report(capsys):
    def emit(r):
        with capsys.disabled():
            print(f"\ncriterion {r.number:2d}: {'PASS' if r.passed else 'FAIL'}  {r.title}")
        return r
    return emit


def test_criterion_01_thue_morse_abelian_complexity(report):
    r = report(result(1))
    s = "".join(str(bin(i).count("1") % 2) for i in range(4096))
    oracle = [len({s[i:i + n].count("1") for i in range(len(s) - n + 1)}) for n in range(1, 201)]
    assert oracle == [2 if n % 2 else 3 for n in range(1, 201)]
    assert r.passed, r.render()


def test_criterion_02_sturmian_signature(report):
    assert report(result(2)).passed, result(2).render()


def test_criterion_03_corridor_equivalence(report):
    assert report(result(3)).passed, result(3).render()


def test_criterion_04_periodic_closure_example(report):
    r = report(result(4))
    assert r.passed, r.render()


def test_criterion_05_periodic_census(report):
    r = report(result(5))
    for k in range(1, 6):
        expected = sorted("0" * (2 * k - 1 - i) + "1" + "0" * i + "1" for i in range(k))
        canon = sorted(min(b[j:] + b[:j] for j in range(len(b))) for b in expected)
        assert any(" ".join(canon) in d for d in r.details), (k, canon)
    assert r.passed, r.render()


def test_criterion_06_interleaving(report):
    r = report(result(6))
    fib = fibonacci().render(20)
    z0, z1 = itertools.cycle("0102"), itertools.cycle("ab")
    oracle = "".join(next(z0) if c == "0" else next(z1) for c in fib)
    assert oracle == "0a10b2a01b02a0b10a2b"
    assert interleave(InterleaveSpec(fibonacci(), periodic("0102"), periodic("ab"))).render(20) == oracle
    assert r.passed, r.render()


def test_criterion_07_heavy_light_geometry(report):
    assert report(result(7)).passed, result(7).render()


def test_criterion_08_offset_asymmetry(report):
    assert report(result(8)).passed, result(8).render()


def test_criterion_09_minimal_complexity_probes(report):
    assert report(result(9)).passed, result(9).render()


def test_criterion_10_arnoux_rauzy(report):
    assert report(result(10)).passed, result(10).render()


def test_criterion_11_forbidden_factor_fixtures(report):
    assert report(result(11)).passed, result(11).render()


def test_criterion_12_determinism(report):
    base = list(range(1, 12))
    first = vf._render(vf._run_many(base, 1))
    r = report(vf.c12(base, 1, first))
    assert r.passed, r.render()
