"""The acceptance battery behind ``abclosure verify``.

Each criterion is a function returning a :class:`CriterionResult`.  Output is
deterministic: no timings are printed, only whether a runtime budget (thread
CPU time) was met.  Criteria run in a thread pool; results are reported in
criterion order whatever order they finish in.
"""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import closure as cl
from . import generators as g
from . import kernels
from . import subshift as sub
from .exactnum import QuadExt, circle_distance, qe_compare, reduce_mod1
from .words import (
    FiniteWord, abelian_complexity, factor_complexities, factor_set, is_balanced,
    stabilized_index,
)

SQRT2M1 = QuadExt(-1, 1, 2)                 # sqrt(2) - 1
GOLD = QuadExt(Fraction(3, 2), Fraction(-1, 2), 5)   # (3 - sqrt 5)/2


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: List[str] = field(default_factory=list)

    def render(self) -> str:
        head = f"criterion {self.number:>2}: {'PASS' if self.passed else 'FAIL'}  {self.title}"
        return "\n".join([head] + [f"    {d}" for d in self.details])


class _Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds
        self.t0 = time.thread_time()

    @property
    def ok(self) -> bool:
        return time.thread_time() - self.t0 < self.seconds

    def line(self) -> str:
        return f"runtime budget {self.seconds:g} s (thread CPU): {'met' if self.ok else 'EXCEEDED'}"


# ---------------------------------------------------------------------------

def c1() -> CriterionResult:
    b = _Budget(5)
    idx = stabilized_index(g.thue_morse(), 200)
    bad = [n for n in range(1, 201) if len(idx.keys[n]) != (2 if n % 2 else 3)]
    ok = not bad and idx.stabilized and b.ok
    return CriterionResult(1, "Thue-Morse abelian complexity is 2 (odd n) and 3 (even n), n <= 200", ok, [
        f"window {idx.window}, stabilized={idx.stabilized}",
        f"lengths with the wrong count: {bad[:10] or 'none'}", b.line()])


def c2() -> CriterionResult:
    b = _Budget(10)
    slopes = [("(3-sqrt5)/2", GOLD, GOLD), ("sqrt2-1", SQRT2M1, QuadExt(0)),
              ("2-sqrt2", 1 - SQRT2M1, QuadExt(Fraction(1, 3)))]
    details, ok = [], True
    for label, a, rho in slopes:
        x = g.BinaryRotationWord(g.BinaryRotationSpec(a, rho))
        idx = stabilized_index(x, 100)
        ab = all(len(idx.keys[n]) == 2 for n in range(1, 101))
        fc = factor_complexities(x, 100, idx.window)
        fac = all(int(fc[n]) == n + 1 for n in range(1, 101))
        cor = all(int(idx.mins[n, 1]) == (n * a).floor() for n in range(1, 101))
        ok &= ab and fac and cor and idx.stabilized
        details.append(f"slope {label}: abelian=2 {ab}, factor=n+1 {fac}, corridor min=floor(n alpha) {cor}")
    ok &= b.ok
    details.append(b.line())
    return CriterionResult(2, "Sturmian signature for three quadratic slopes, n <= 100", ok, details)


def _binary_fixtures():
    return [
        g.thue_morse(), g.fibonacci(),
        g.BinaryRotationWord(g.BinaryRotationSpec(SQRT2M1, 0), name="sturmian(sqrt2-1, 0)"),
        g.BinaryRotationWord(g.BinaryRotationSpec(1 - GOLD, Fraction(1, 2)), name="sturmian((sqrt5-1)/2, 1/2)"),
        g.periodic("01"), g.periodic("0011"), g.preperiodic("0011", "001101"),
        g.periodic("00101"), g.periodic("001"), g.Shift(g.fibonacci(), 5),
        g.BinaryRotationWord(g.BinaryRotationSpec(GOLD, Fraction(1, 3)), name="sturmian((3-sqrt5)/2, 1/3)"),
        g.BinaryRotationWord(g.BinaryRotationSpec(SQRT2M1, Fraction(1, 5), "bar"), name="sturmian(sqrt2-1, 1/5, bar)"),
        g.periodic("0110"),
    ]


# (y, x) index pairs into _binary_fixtures: related words first, then unrelated ones
_C3_PAIRS = [(9, 1), (1, 9), (10, 1), (1, 10), (11, 2), (2, 11), (4, 0), (5, 0), (0, 6), (6, 0),
             (12, 0), (12, 5), (7, 0), (1, 0), (0, 1), (2, 1), (3, 1), (8, 4), (4, 1), (1, 4)]


def c3() -> CriterionResult:
    fx = _binary_fixtures()
    dis, members = [], 0
    for i, j in _C3_PAIRS:
        a = cl.abelian_member(fx[i], fx[j], 30, 2000)
        c = cl.corridor_member(fx[i], fx[j], 30, 2000)
        members += a.member
        if a.result != c.result:
            dis.append(f"{fx[i].name} vs {fx[j].name}")
    n = len(_C3_PAIRS)
    return CriterionResult(3, f"Corridor criterion agrees with abelian membership on {n} binary pairs, L = 30",
                           not dis, [f"pairs: {n} ({members} member, {n - members} rejected)",
                                     f"disagreements: {len(dis)}"] + dis)


def _is_00_10k_0(w: str) -> bool:
    if not (w.startswith("00") and w.endswith("0")):
        return False
    mid = w[2:-1]
    return len(mid) % 2 == 0 and mid == "10" * (len(mid) // 2)


def c4() -> CriterionResult:
    tm, x = g.thue_morse(), g.preperiodic("0011", "001101")
    a = cl.abelian_member(tm, x, 60, 4000)
    b = cl.abelian_member(x, tm, 60, 4000)
    y = g.preperiodic("00", "10")
    r = cl.abelian_member(y, tm, 60, 4000)
    shape = r.witness is not None and _is_00_10k_0(r.witness.factor)
    details = [f"TM in A(x): {a.result}", f"x in A(TM): {b.result}",
               f"00(10)^w in A(TM): {r.result}" + (f", witness {r.witness.factor}" if r.witness else "")]
    if not r.witness:
        # 00(10)^w = 0(01)^w lies in {e,0,1}{01,10}^N, so no witness exists
        z = g.periodic("00101")
        rz = cl.abelian_member(z, tm, 60, 4000)
        details.append("00(10)^w = 0.(01)^w belongs to {e,0,1}{01,10}^N, the closure of TM; "
                       "the requested rejection is unattainable")
        details.append(f"a word with two 00 blocks and no 11 between, (00101)^w: {rz.result}"
                       + (f", witness {rz.witness.factor} (shape 00(10)^k0: "
                          f"{_is_00_10k_0(rz.witness.factor)})" if rz.witness else ""))
    ok = a.member and b.member and not r.member and shape
    return CriterionResult(4, "TM and 0011(001101)^w in each other's closures; 00(10)^w rejected", ok, details)


def _census_expected(k: int) -> set:
    return {cl.canonical_rotation("0" * (2 * k - 1 - i) + "1" + "0" * i + "1") for i in range(k)}


def c5() -> CriterionResult:
    details, ok = [], True
    b = None
    for k in range(1, 6):
        if k == 5:
            b = _Budget(30)
        r = cl.periodic_census(g.periodic("0" * (2 * k - 1) + "11"), 500)
        good = set(r.representatives) == _census_expected(k) and r.n0 == 2 * k + 1
        ok &= good
        details.append(f"k={k}: n0={r.n0}, {r.candidates} candidate orbits, "
                       f"{len(r.representatives)} found: {' '.join(r.representatives)}")
    ok &= b.ok
    details.append("k=5 " + b.line())
    return CriterionResult(5, "periodic census of (0^(2k-1)11)^w has exactly k orbits, k = 1..5", ok, details)


def c6() -> CriterionResult:
    fib = g.fibonacci()
    u = g.interleave(g.InterleaveSpec(fib, g.periodic("0102"), g.periodic("ab")))
    pref = u.render(20)
    bal, wit = is_balanced(u, 60, 10000)
    v = g.interleave(g.InterleaveSpec(g.fibonacci(), g.Shift(g.periodic("0102"), 2),
                                      g.Shift(g.periodic("ab"), 1)))
    mv = cl.abelian_member(v, u, 60, 4000)
    s2 = g.BinaryRotationWord(g.BinaryRotationSpec(SQRT2M1, 0))
    w = g.interleave(g.InterleaveSpec(s2, g.periodic("0102"), g.periodic("ab")))
    mw = cl.abelian_member(w, u, 60, 4000)
    ok = pref == "0a10b2a01b02a0b10a2b" and bal and mv.member and not mw.member
    return CriterionResult(6, "interleaving S(fib,(0102)^w,(ab)^w)", ok, [
        f"prefix(20) = {pref}", f"balanced up to 60: {bal}",
        f"S(fib, shift^2 z0, shift z1): {mv.result}",
        f"S(sturmian sqrt2-1, z0, z1): {mw.result}" + (f", witness {mw.witness.factor}" if mw.witness else "")])


def hl_specs() -> list:
    a = SQRT2M1
    z_hi = QuadExt(15, -6, 2)     # {-6a}, above 1/2
    z_lo = QuadExt(-8, 6, 2)      # {6a}, below 1/2
    return [
        g.TernaryRotationSpec(a, Fraction(9, 20), 0),
        g.TernaryRotationSpec(a, Fraction(1, 2), a, True, True),
        g.TernaryRotationSpec(a, a, 0),
        g.TernaryRotationSpec(a, 1 - a, 0, True, True),
        g.TernaryRotationSpec(a, Fraction(43, 100), Fraction(1, 3), False, True),
        g.TernaryRotationSpec(a, z_hi, -6 * a, False, True),       # boundary, orbit hits
        g.TernaryRotationSpec(a, z_hi, 0, False, True),            # boundary, orbit misses
        g.TernaryRotationSpec(a, z_lo, -3 * a, True, False),       # boundary, orbit hits
        g.TernaryRotationSpec(a, z_lo, Fraction(1, 3), True, False),
        g.TernaryRotationSpec(a, z_lo, -3 * a, False, False),      # boundary, wrong endpoints
    ]


def c7() -> CriterionResult:
    b = _Budget(60)
    specs = hl_specs()
    dis, branches = [], {}
    for sp in specs:
        scan = cl.hl_scan(sp, 40, 20000)
        for m in range(1, 41):
            for j, kind in enumerate(cl.HL_KINDS):
                r = cl.exists_hl_factor(kind, sp, m)
                branches[r.branch] = branches.get(r.branch, 0) + 1
                if r.value != bool(scan[m, j]):
                    dis.append(f"{sp} m={m} {kind}: lemma {r.value}, scan {bool(scan[m, j])}")
    ok = not dis and b.ok and branches.get("boundary-hit", 0) > 0
    return CriterionResult(7, "heavy/light factor geometry agrees with a window scan, m <= 40, N = 20000", ok, [
        f"specs: {len(specs)}, checks: {len(specs) * 40 * 4}, disagreements: {len(dis)}",
        "branches: " + ", ".join(f"{k}={v}" for k, v in sorted(branches.items()))] + dis[:5] + [b.line()])


def c8() -> CriterionResult:
    a = SQRT2M1
    zs = [Fraction(43, 100), Fraction(9, 20), Fraction(1, 2)]
    details, ok = [], True
    for lo, hi in itertools.combinations(zs, 2):
        r = cl.offset_order_member(g.TernaryRotationSpec(a, hi, 0), g.TernaryRotationSpec(a, lo, 0), 40, 4000)
        exact = False
        if r.witness_m is not None:
            mu = reduce_mod1(-r.witness_m * a).value
            exact = qe_compare(circle_distance(hi), mu) > 0 and qe_compare(mu, circle_distance(lo)) > 0
        good = r.ok and exact
        ok &= good
        details.append(f"zeta {hi} over {lo}: up {r.forward.result}, down {r.backward.result}, "
                       f"light witness length m={r.witness_m} ({r.witness_factor}), "
                       f"||zeta_hi|| > {{-m alpha}} > ||zeta_lo||: {exact}")
    return CriterionResult(8, "larger offsets lie in the closures of smaller ones, not conversely", ok, details)


def _case2_words(N: int):
    phi = {"0": "02", "1": "12"}
    fib = g.fibonacci()
    u = g.MorphicImage(fib, phi, name="phi(fib)")
    accept = [("shift 1", g.Shift(u, 1)), ("shift 2", g.Shift(u, 2)), ("shift 7", g.Shift(u, 7)),
              ("phi(s_{alpha,1/3})", g.MorphicImage(
                  g.BinaryRotationWord(g.BinaryRotationSpec(GOLD, Fraction(1, 3))), phi)),
              ("phi(s_{alpha,0} bar)", g.MorphicImage(
                  g.BinaryRotationWord(g.BinaryRotationSpec(GOLD, 0, "bar")), phi))]
    w = u.prefix(N)
    mid = N // 2 + (N // 2) % 2       # even position: a backbone letter
    deleted = np.delete(w, mid + 1)
    doubled = np.insert(w, mid + 1, w[mid + 1])
    sw = fib.prefix(N).copy()
    i = int(np.flatnonzero((sw[:-1] == 1) & (sw[1:] == 0))[5]) + 1
    sw[i] = 1
    reject = [("flipped backbone letter", g.MorphicImage(g.FromFinite(FiniteWord(sw, fib.alphabet)), phi)),
              ("deleted 2", FiniteWord(deleted, u.alphabet)),
              ("doubled 2", FiniteWord(doubled, u.alphabet)),
              ("other slope", g.MorphicImage(g.BinaryRotationWord(g.BinaryRotationSpec(SQRT2M1, 0)), phi)),
              ("phi((01)^w)", g.MorphicImage(g.periodic("01"), phi))]
    return u, accept, reject


def c9() -> CriterionResult:
    N, L = 4000, 40
    details, ok = [], True
    u, accept, reject = _case2_words(N)
    acc = sum(cl.abelian_member(y, u, L, N if not isinstance(y, FiniteWord) else None).member
              for _, y in accept)
    rej = 0
    for label, y in reject:
        v = cl.abelian_member(y, u, L, N if not isinstance(y, FiniteWord) else None)
        rej += not v.member
    ok &= acc == 5 and rej == 5
    details.append(f"case 0->02,1->12: {acc}/5 shift-orbit words accepted, {rej}/5 others rejected")
    a = SQRT2M1
    u3 = g.TernaryRotationSpec(a, a, 2 * a)
    cands = [g.TernaryRotationSpec(a, z, r) for z, r in
             [(a, 0), (Fraction(9, 20), 0), (Fraction(1, 2), a), (Fraction(11, 20), Fraction(1, 3)),
              (1 - a, 0)]]
    cands.append(g.TernaryRotationSpec(1 - GOLD - Fraction(1, 4), Fraction(1, 2), 0))  # other slope
    r3 = cl.np2_closure_probe(u3, cands, L, N)
    inside = sum(1 for c in r3.cases[:-2] if c.ok and c.expected == cl.MEMBER)
    ok &= r3.ok and inside >= 5
    details.append(f"case 0->0,1->12 (u = t(alpha,alpha,2alpha)): {inside} offsets accepted, "
                   f"other slope {r3.cases[-2].verdict.result}, 02u {r3.cases[-1].verdict.result}")
    u4 = g.fm_min_complexity_word("0", "1", "23", g.fibonacci())
    r4 = cl.minimal_subshift_probe_4letter(u4, 30, N)
    rejected = sum(1 for c in r4.cases if c.expected == cl.REJECTED and c.ok)
    ok &= r4.ok and rejected == 3
    details.append(f"4-letter fm word: reversal approximant {r4.cases[1].verdict.result}, "
                   f"{rejected}/3 block mutants rejected")
    return CriterionResult(9, "minimal-complexity trichotomy probes", ok, details)


def c10() -> CriterionResult:
    c = g.ArnouxRauzy(g.periodic("012"))
    t = g.tribonacci()
    same = all(factor_set(c, n, 1000) == factor_set(t, n, 1000) for n in range(1, 21))
    r = cl.ar_closure_probe(c, 50, 4000)
    ok = same and r.ok and r.absent_factor is not None and len(r.absent_factor) <= 10
    return CriterionResult(10, "Arnoux-Rauzy word of (012)^w and the 20c phenomenon", ok, [
        f"factor sets equal to the Tribonacci word up to length 20 (window 1000): {same}",
        f"20c in A(c) up to 50: {r.member.result}",
        f"factor of 20c outside L(c): {r.absent_factor}"])


def c11() -> CriterionResult:
    gm = sub.golden_mean()
    mismatch = 0
    for n in range(1, 11):
        for t in itertools.product("01", repeat=n):
            w = "".join(t)
            mismatch += bool(sub.abelian_legal(w, gm, 10)) != sub.legal(w, gm)
    reports = [sub.sft_counterexample_report(n) for n in (4, 10)]
    ws = sub.nonsofic_witness(8)
    expected = {"c" + "".join(t) + "d" for n in range(9) for t in itertools.product("ab", repeat=n)
                if t.count("a") != t.count("b")}
    counts_ok = all(sum(1 for w in ws if len(w) == n + 2) == sub.unbalanced_count(n)
                    and (n % 2 or sub.unbalanced_count(n) == 2 ** n - comb(n, n // 2))
                    for n in range(9))
    ok = mismatch == 0 and all(r.ok for r in reports) and ws == expected and counts_ok
    return CriterionResult(11, "forbidden-factor fixtures", ok, [
        f"golden mean: abelian-legal vs legal mismatches up to length 10: {mismatch}",
        *(f"three-letter SFT, n={r.fields['n']}: short factors abelian-legal "
          f"{r.fields['short_factors_abelian_legal']}, {r.fields['witness']} rejected {r.fields['witness_rejected']}"
          for r in reports),
        f"non-sofic witness set for |w| <= 8: {len(ws)} words, equals the unbalanced set: {ws == expected}",
        f"counts match 2^n - C(n,n/2): {counts_ok}"])


CRITERIA: Dict[int, Callable[[], CriterionResult]] = {
    1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10, 11: c11,
}

SUITES = {
    "all": list(range(1, 13)),
    "quick": [3, 6, 10, 11, 12],
}


def max_workers(requested: int) -> int:
    cap = os.environ.get("ABCLOSURE_WORKERS")
    if cap and cap.isdigit() and int(cap) > 0:
        return max(1, min(requested, int(cap)))
    return max(1, requested)


def _run_many(numbers: Sequence[int], workers: int) -> List[CriterionResult]:
    def one(n):
        try:
            return CRITERIA[n]()
        except Exception as e:  # a crash is a failed criterion, not a crashed battery
            return CriterionResult(n, "crashed", False, [f"{type(e).__name__}: {e}"])

    workers = max_workers(workers)
    if workers == 1:
        return [one(n) for n in numbers]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, numbers))


def _render(results) -> str:
    return "\n".join(r.render() for r in results)


def parse_suite(name: str) -> List[int]:
    if name in SUITES:
        return SUITES[name]
    try:
        nums = sorted({int(t) for t in name.split(",") if t.strip()})
    except ValueError:
        raise ValueError(f"unknown suite {name!r}: use {', '.join(SUITES)} or a list like 1,5,12") from None
    bad = [n for n in nums if n not in CRITERIA and n != 12]
    if bad or not nums:
        raise ValueError(f"no such criteria: {bad or name}")
    return nums


def run_suite(name: str = "all", workers: int = 1) -> List[CriterionResult]:
    kernels.warmup()
    nums = parse_suite(name)
    base = [n for n in nums if n != 12]
    results = _run_many(base, workers)
    if 12 in nums:
        results.append(c12(base, workers, _render(results)))
    return results


def c12(base: Sequence[int], workers: int, first: str) -> CriterionResult:
    runs = {max_workers(workers): first}
    for w in (1, 8):
        if max_workers(w) not in runs:
            runs[max_workers(w)] = _render(_run_many(base, w))
    again = _render(_run_many(base, workers))
    texts = list(runs.values()) + [again]
    same = all(t == texts[0] for t in texts)
    counts = ", ".join(str(w) for w in sorted(runs))
    return CriterionResult(12, "verify output is byte-identical across runs and worker counts", same, [
        f"criteria compared: {', '.join(map(str, base)) or 'none'}",
        f"worker counts: {counts} (ABCLOSURE_WORKERS caps the count), plus a repeat run",
        f"identical: {same}"])


def render_results(results) -> str:
    passed = sum(r.passed for r in results)
    return _render(results) + f"\n{passed}/{len(results)} criteria passed\n"
