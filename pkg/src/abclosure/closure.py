"""Finite-scale abelian-closure membership and the probes built on it.

``y`` is *member up to L* of the closure of ``x`` when every factor of
length <= L in y's window has the Parikh vector of some factor of x (x's
factors come from a stabilized window).  Nothing here is an unconditional
claim about infinite words; every verdict records the windows it used.
"""
from __future__ import annotations

import itertools
import json
import threading
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .exactnum import CircleInterval, QuadExt, circle_distance, qe_compare, reduce_mod1
from .generators import (
    ArnouxRauzy, BinaryRotationSpec, FromFinite, MorphicImage, Prepend, SpecError,
    TernaryRotationSpec, letters_of_directive_ok, periodic, reversal_prefix,
    ternary_rotation_word,
)
from .words import (
    AbelianIndex, Alphabet, FiniteWord, InfiniteWord, abelian_complexity, corridor_profile,
    factor_set, is_periodic_window, stabilized_index, window_of,
)

MEMBER = "member-up-to-L"
REJECTED = "rejected"

HL_KINDS = ("12heavy", "12light", "1heavy2light", "2heavy1light")


class AlphabetMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Witness:
    factor: str
    length: int
    position: int


@dataclass(frozen=True)
class MembershipVerdict:
    query: str
    result: str
    L: int
    window: int
    x_window: int
    x_stabilized: bool
    witness: Optional[Witness] = None
    method: str = "abelian"

    @property
    def member(self) -> bool:
        return self.result == MEMBER

    def __bool__(self):
        return self.member

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = 1
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self):
        s = f"{self.query}: {self.result} (L={self.L}, window={self.window}, x_window={self.x_window})"
        if self.witness:
            s += f" witness={self.witness.factor} at length {self.witness.length}"
        return s


_cache_lock = threading.Lock()


def closure_index(x, L: int, N: int) -> AbelianIndex:
    """Stabilized abelian index of x, memoized on the word object."""
    if isinstance(x, FiniteWord):
        return AbelianIndex.build(x, L)
    key = (L, N)
    with _cache_lock:
        cache = x.__dict__.setdefault("_closure_index_cache", {})
        idx = cache.get(key)
    if idx is None:
        idx = stabilized_index(x, L, N0=N)
        with _cache_lock:
            cache[key] = idx
    return idx


def _name(w) -> str:
    return w.name if isinstance(w, InfiniteWord) else str(w)


def _y_window(y, x_alphabet: Alphabet, N: Optional[int]) -> np.ndarray:
    w = window_of(y, N)
    missing = set(y.alphabet.names) - set(x_alphabet.names)
    if missing and np.isin(w, [y.alphabet.index(a) for a in missing]).any():
        raise AlphabetMismatch(
            f"alphabet mismatch: letters {sorted(missing)} of {_name(y)} do not occur in the target alphabet "
            f"{list(x_alphabet.names)}")
    if missing:
        # unused extra letters: drop them from the alphabet view
        keep = Alphabet(tuple(a for a in y.alphabet.names if a not in missing))
        table = np.array([keep.names.index(a) if a in keep.names else 0 for a in y.alphabet.names],
                         dtype=np.uint8)
        return keep.translate(table[w], x_alphabet)
    return y.alphabet.translate(w, x_alphabet)


def abelian_member(y, x, L: int, N: Optional[int] = None) -> MembershipVerdict:
    """Check every factor of y's window of length <= L against x's abelian index.

    The rejection witness is the shortest offending factor, earliest position.
    """
    w = np.ascontiguousarray(_y_window(y, x.alphabet, N))
    if L > len(w):
        raise ValueError(f"L={L} exceeds the window {len(w)}")
    idx = closure_index(x, L, N or len(w))
    counts = kernels.prefix_counts(w, len(x.alphabet))
    query = f"{_name(y)} in A({_name(x)})"
    for n in range(1, L + 1):
        keys = kernels.parikh_keys(counts, n, idx.base)
        bad = np.flatnonzero(~np.isin(keys, idx.keys[n]))
        if len(bad):
            i = int(bad[0])
            wit = Witness(x.alphabet.render(w[i:i + n]), n, i)
            return MembershipVerdict(query, REJECTED, L, len(w), idx.window, idx.stabilized, wit)
    return MembershipVerdict(query, MEMBER, L, len(w), idx.window, idx.stabilized)


def corridor_member(y, x, L: int, N: Optional[int] = None, letter: Optional[str] = None) -> MembershipVerdict:
    """Binary corridor criterion: corridor(y, 1, n) inside corridor(x, 1, n) for n <= L."""
    if len(x.alphabet) != 2 or len(set(y.alphabet.names) | set(x.alphabet.names)) > 2:
        raise AlphabetMismatch("corridor criterion is binary-only")
    w = np.ascontiguousarray(_y_window(y, x.alphabet, N))
    if L > len(w):
        raise ValueError(f"L={L} exceeds the window {len(w)}")
    idx = closure_index(x, L, N or len(w))
    a = x.alphabet.index(letter) if letter is not None else 1
    counts = kernels.prefix_counts(w, 2)
    query = f"{_name(y)} in A({_name(x)})"
    for n in range(1, L + 1):
        win = counts[n:, a] - counts[: len(counts) - n, a]
        bad = np.flatnonzero((win < idx.mins[n, a]) | (win > idx.maxs[n, a]))
        if len(bad):
            i = int(bad[0])
            wit = Witness(x.alphabet.render(w[i:i + n]), n, i)
            return MembershipVerdict(query, REJECTED, L, len(w), idx.window, idx.stabilized, wit,
                                     method="corridor")
    return MembershipVerdict(query, MEMBER, L, len(w), idx.window, idx.stabilized, method="corridor")


def frequency_gate(y, x, a: str, n: int, N: int) -> bool:
    """False when y's count corridor for letter a at length n leaves x's."""
    ai = x.alphabet.index(a)
    ylo, yhi = (int(v[n, y.alphabet.index(a)]) for v in corridor_profile(y, n, N))
    idx = closure_index(x, n, N)
    return idx.mins[n, ai] <= ylo and yhi <= idx.maxs[n, ai]


# ---------------------------------------------------------------------------
# heavy / light geometry

@dataclass(frozen=True)
class HeavyLightClass:
    heavy1: bool
    heavy2: bool

    @property
    def tags(self) -> dict:
        return {"1": "heavy" if self.heavy1 else "light", "2": "heavy" if self.heavy2 else "light"}

    @property
    def kind(self) -> str:
        return {(True, True): "12heavy", (False, False): "12light",
                (True, False): "1heavy2light", (False, True): "2heavy1light"}[(self.heavy1, self.heavy2)]


def heavy_light_classify(v, x, N: int) -> HeavyLightClass:
    if isinstance(v, str):
        v = FiniteWord(x.alphabet.encode(v), x.alphabet)
    m = len(v)
    w = window_of(x, N)
    if m == 0 or w.tobytes().find(v.symbols.tobytes()) < 0:
        raise ValueError(f"{v} is not a factor of the window")
    _, maxs = corridor_profile(x, m, N)
    i1, i2 = x.alphabet.index("1"), x.alphabet.index("2")
    c = np.bincount(v.symbols, minlength=len(x.alphabet))
    return HeavyLightClass(bool(c[i1] == maxs[m, i1]), bool(c[i2] == maxs[m, i2]))


@dataclass(frozen=True)
class HLResult:
    kind: str
    m: int
    value: bool
    branch: str

    def __bool__(self):
        return self.value

    def to_dict(self):
        return {"schema": 1, "kind": self.kind, "m": self.m, "result": self.value, "branch": self.branch}


def _on_backward_orbit(rho: QuadExt, p: QuadExt, alpha: QuadExt) -> bool:
    """Is rho = {p - n*alpha} for some integer n >= 0?  (alpha irrational)"""
    d = rho - p
    if d.q1 != 0 and alpha.D != d.D:
        return False
    n = -d.q1 / alpha.q1
    if n.denominator != 1 or n < 0:
        return False
    return (d.q0 + n * alpha.q0).denominator == 1


def exists_hl_factor(kind: str, spec: TernaryRotationSpec, m: int) -> HLResult:
    """Does t_{alpha,zeta,rho} have a length-m factor of the given heavy/light kind?

    Decided on the circle: with mu = {-m alpha}, 1-2-heavy factors exist iff
    mu < 1 - ||zeta||, 1-2-light ones iff mu > ||zeta||; equality is settled by
    the endpoint conventions and whether the orbit of rho hits the critical point.
    """
    if kind not in HL_KINDS:
        raise ValueError(f"kind must be one of {HL_KINDS}")
    if m < 1:
        raise ValueError("m must be >= 1")
    alpha = spec.alpha
    if alpha.is_rational:
        raise SpecError("heavy/light geometry needs an irrational slope")
    if kind in ("1heavy2light", "2heavy1light"):
        return HLResult(kind, m, True, "always")
    mu = reduce_mod1(-m * alpha).value
    nz = circle_distance(spec.zeta)
    low_half = qe_compare(spec.zeta, Fraction(1, 2)) <= 0
    high_half = qe_compare(spec.zeta, Fraction(1, 2)) >= 0
    flags = (spec.one_in_j1, spec.zeta_in_j2)
    crit_zero = QuadExt(0)         # rho = {-n alpha}
    crit_mu = mu                   # rho = {-(m+n) alpha}
    if kind == "12heavy":
        c = qe_compare(mu, 1 - nz)
        if c != 0:
            return HLResult(kind, m, c < 0, "strict")
        hit = ((low_half and flags == (True, False) and _on_backward_orbit(spec.rho, crit_zero, alpha))
               or (high_half and flags == (False, True) and _on_backward_orbit(spec.rho, crit_mu, alpha)))
    else:
        c = qe_compare(mu, nz)
        if c != 0:
            return HLResult(kind, m, c > 0, "strict")
        hit = ((low_half and flags == (True, False) and _on_backward_orbit(spec.rho, crit_mu, alpha))
               or (high_half and flags == (False, True) and _on_backward_orbit(spec.rho, crit_zero, alpha)))
    return HLResult(kind, m, bool(hit), "boundary-hit" if hit else "boundary-miss")


def hl_scan(spec: TernaryRotationSpec, max_len: int, N: int) -> np.ndarray:
    """Brute-force oracle: which kinds occur among the factors of prefix(N), m = 1..max_len.

    Heavy means |v|_a = floor(m alpha) + 1 for a in {1, 2}.
    """
    w = np.ascontiguousarray(ternary_rotation_word(spec).prefix(N))
    heavy = np.array([0] + [(m * spec.alpha).floor() + 1 for m in range(1, max_len + 1)],
                     dtype=np.int64)
    return kernels.heavy_light_scan(w, max_len, heavy, heavy)


def heavy_prefix_predicate(spec: BinaryRotationSpec, m: int) -> bool:
    """Is the length-m prefix of s_{alpha,rho} heavy?  rho in I(R^{-m}(0), 1),
    containing R^{-m}(0) exactly when 1 is not in I_1."""
    one_in_i1 = spec.convention == "bar"
    arc = CircleInterval(reduce_mod1(-m * spec.alpha).value, QuadExt(1),
                         include_start=not one_in_i1, include_end=one_in_i1)
    return spec.rho in arc


# ---------------------------------------------------------------------------
# offsets

@dataclass(frozen=True)
class OffsetOrderReport:
    forward: MembershipVerdict      # A in A(B)
    backward: MembershipVerdict     # B in A(A)
    expect_asymmetry: bool
    witness_m: Optional[int]
    witness_factor: Optional[str]
    inequality_exact: bool
    ok: bool

    def to_dict(self):
        return {"schema": 1, "forward": self.forward.to_dict(), "backward": self.backward.to_dict(),
                "expect_asymmetry": self.expect_asymmetry, "witness_m": self.witness_m,
                "witness_factor": self.witness_factor, "inequality_exact": self.inequality_exact,
                "ok": self.ok}


def _light_factors(spec: TernaryRotationSpec, m: int, N: int):
    """Positions and Parikh keys (base b) of the 1-2-light length-m factors of the window."""
    w = np.ascontiguousarray(ternary_rotation_word(spec).prefix(N))
    counts = kernels.prefix_counts(w, 3)
    heavy = (m * spec.alpha).floor() + 1
    win = counts[m:] - counts[: len(counts) - m]
    return w, np.flatnonzero((win[:, 1] != heavy) & (win[:, 2] != heavy)), win


def offset_order_member(specA: TernaryRotationSpec, specB: TernaryRotationSpec, L: int,
                        N: int) -> OffsetOrderReport:
    """Larger-offset asymmetry: if ||zeta_A|| > ||zeta_B|| then A in A(B) and B not in A(A),
    the latter witnessed by a 1-2-light factor of a length m with
    ||zeta_A|| > {-m alpha} > ||zeta_B||."""
    if specA.alpha != specB.alpha:
        raise SpecError("offset comparison needs equal slopes")
    A, B = ternary_rotation_word(specA), ternary_rotation_word(specB)
    fwd = abelian_member(A, B, L, N)
    bwd = abelian_member(B, A, L, N)
    nA, nB = circle_distance(specA.zeta), circle_distance(specB.zeta)
    asym = qe_compare(nA, nB) > 0
    if not asym:
        ok = fwd.member and (bwd.member if nA == nB else True)
        return OffsetOrderReport(fwd, bwd, False, None, None, False, ok)
    wm, wf, exact = None, None, False
    idxA = closure_index(A, L, N)
    for m in range(1, L + 1):
        mu = reduce_mod1(-m * specA.alpha).value
        if not (qe_compare(nA, mu) > 0 and qe_compare(mu, nB) > 0):
            continue
        w, hits, win = _light_factors(specB, m, N)
        keys = win[hits] @ (idxA.base ** np.arange(3, dtype=np.int64))
        fresh = hits[~np.isin(keys, idxA.keys[m])]
        if len(fresh):
            i = int(fresh[0])
            wm, wf, exact = m, B.alphabet.render(w[i:i + m]), True
            break
    ok = fwd.member and not bwd.member and exact
    return OffsetOrderReport(fwd, bwd, True, wm, wf, exact, ok)


# ---------------------------------------------------------------------------
# periodic census

@dataclass(frozen=True)
class CensusReport:
    word: str
    period: int
    n0: int
    candidates: int
    representatives: tuple

    def to_dict(self):
        return {"schema": 1, "word": self.word, "period": self.period, "n0": self.n0,
                "candidates": self.candidates, "representatives": list(self.representatives)}


def _primitive_root(s: str) -> str:
    n = len(s)
    for d in range(1, n + 1):
        if n % d == 0 and s[:d] * (n // d) == s:
            return s[:d]
    return s


def canonical_rotation(s: str) -> str:
    r = _primitive_root(s)
    return min(r[i:] + r[:i] for i in range(len(r)))


def _distinct_arrangements(counts: Sequence[int], names: Sequence[str]):
    """All words with the given letter counts, lexicographic order."""
    total = sum(counts)
    if total == 0:
        yield ""
        return
    for i, c in enumerate(counts):
        if c:
            rest = list(counts)
            rest[i] -= 1
            for tail in _distinct_arrangements(rest, names):
                yield names[i] + tail


def abelian_period_length(z, N: int) -> int:
    """Least n with all length-n factors of the window abelian equivalent."""
    p = is_periodic_window(z, N)
    if p is None:
        raise ValueError(f"{_name(z)} is not periodic on a window of {N}")
    for n in range(1, p + 1):
        if abelian_complexity(z, n, N) == 1:
            return n
    return p


def periodic_census(z, N: int) -> CensusReport:
    """Every periodic word of the closure of a periodic word z, up to shift.

    A periodic y in the closure has all its length-n0 factors abelian equivalent
    to z's, hence y is n0-periodic; so the n0-blocks with that Parikh vector
    are a complete candidate list.
    """
    p = is_periodic_window(z, N)
    if p is None:
        raise ValueError(f"{_name(z)} is not periodic on a window of {N}")
    n0 = abelian_period_length(z, N)
    w = window_of(z, N)
    counts = np.bincount(w[:n0], minlength=len(z.alphabet)).tolist()
    L = 2 * n0
    reps = set()
    seen = set()
    cand = 0
    for block in _distinct_arrangements(counts, z.alphabet.names):
        canon = canonical_rotation(block)
        if canon in seen:
            continue
        seen.add(canon)
        cand += 1
        y = periodic(block, z.alphabet)
        if abelian_member(y, z, L, max(N, 4 * L)).member:
            reps.add(canon)
    return CensusReport(_name(z), p, n0, cand, tuple(sorted(reps)))


# ---------------------------------------------------------------------------
# probes for the minimal-complexity constructions

@dataclass(frozen=True)
class ProbeCase:
    label: str
    expected: str
    verdict: MembershipVerdict

    @property
    def ok(self) -> bool:
        return self.verdict.result == self.expected

    def to_dict(self):
        return {"label": self.label, "expected": self.expected, "ok": self.ok,
                "verdict": self.verdict.to_dict()}


@dataclass(frozen=True)
class ProbeReport:
    name: str
    cases: tuple
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def count(self, expected: str) -> int:
        return sum(1 for c in self.cases if c.expected == expected and c.ok)

    def to_dict(self):
        return {"schema": 1, "probe": self.name, "ok": self.ok,
                "cases": [c.to_dict() for c in self.cases], "notes": list(self.notes)}


def np2_closure_probe(u: TernaryRotationSpec, candidates: Sequence[TernaryRotationSpec], L: int,
                      N: int) -> ProbeReport:
    """Sample the closure of u = t_{alpha,alpha,rho}: offsets in [alpha, 1-alpha]
    belong, other slopes do not, and the non-recurrent 02u belongs."""
    if u.zeta != u.alpha:
        raise SpecError("np2 probe expects u with zeta = alpha")
    x = ternary_rotation_word(u)
    cases = []
    for c in candidates:
        inside = c.alpha == u.alpha and u.alpha <= c.zeta <= 1 - u.alpha
        expected = MEMBER if inside else REJECTED
        cases.append(ProbeCase(str(c), expected, abelian_member(ternary_rotation_word(c), x, L, N)))
    y = Prepend("02", x)
    cases.append(ProbeCase("02u", MEMBER, abelian_member(y, x, L, N)))
    return ProbeReport("np2-closure", tuple(cases))


@dataclass(frozen=True)
class Decomposition:
    orientation: str        # "forward" | "reversed" | "inner"
    head: str
    blocks: tuple
    tail: str


def blocks_decompose(w, sigma0, sigma1) -> Optional[Decomposition]:
    """Parse w as (suffix of a block)(blocks)*(prefix of a block), blocks being
    sigma0, sigma1 or, in the reversed orientation, their reversals."""
    w, s0, s1 = str(w), str(sigma0), str(sigma1)
    if not s0 or not s1:
        raise ValueError("blocks must be non-empty")
    for orient, blocks in (("forward", (s0, s1)), ("reversed", (s0[::-1], s1[::-1]))):
        for h in range(len(w) + 1):
            head = w[:h]
            if h and not any(b.endswith(head) and len(head) < len(b) for b in blocks):
                continue
            parsed = _parse_blocks(w[h:], blocks)
            if parsed is not None:
                return Decomposition(orient, head, tuple(parsed[0]), parsed[1])
    for orient, blocks in (("inner", (s0, s1)), ("inner", (s0[::-1], s1[::-1]))):
        if any(w in b for b in blocks):
            return Decomposition(orient, w, (), "")
    return None


def _parse_blocks(rest: str, blocks):
    if any(b.startswith(rest) and len(rest) < len(b) for b in blocks):
        return [], rest
    for b in blocks:
        if rest.startswith(b):
            sub = _parse_blocks(rest[len(b):], blocks)
            if sub is not None:
                return [b] + sub[0], sub[1]
    return None


def fm_mutants(u: MorphicImage, N: int) -> list:
    """Block-level corruptions of an fm word sigma(s): (label, word)."""
    mapping = u.params["mapping"]
    s = u.x
    g0, g1 = mapping["0"], mapping["1"]
    mixed = MorphicImage(s, {"0": g0, "1": g1[::-1]}, u.alphabet, name="mixed-orientation")
    # partial reversal at a block boundary
    w = u.prefix(N)
    lens = np.array([len(mapping[a]) for a in s.alphabet.names])
    bounds = np.cumsum(lens[s.prefix(N)])
    cut = int(bounds[np.searchsorted(bounds, N // 3)])
    part = FiniteWord(np.concatenate([w[:cut], w[cut:][::-1]]), u.alphabet)
    partial = FromFinite(part, name="partially-reversed")
    # flip one backbone letter to create 11 (absent from Sturmian backbones with 0 dominant)
    sw = s.prefix(N).copy()
    i = int(np.flatnonzero((sw[:-1] == 1) & (sw[1:] == 0))[3]) + 1
    sw[i] = 1 - sw[i]
    flipped_s = FromFinite(FiniteWord(sw, s.alphabet), name="flipped")
    flipped = MorphicImage(flipped_s, mapping, u.alphabet, name="flipped-block")
    return [("mixed-orientation", mixed), ("partially-reversed", partial), ("flipped-block", flipped)]


def minimal_subshift_probe_4letter(u: MorphicImage, L: int, N: int, mutants=None) -> ProbeReport:
    """The reversal approximant of u and u itself lie in A(u); block mutants do not."""
    if len(u.alphabet) < 4:
        raise SpecError("the 4-letter probe needs at least 4 letters")
    rev = reversal_prefix(u, N)
    cases = [ProbeCase("u", MEMBER, abelian_member(u, u, L, N)),
             ProbeCase("reversal-approximant", MEMBER, abelian_member(rev, u, L))]
    for label, y in (mutants if mutants is not None else fm_mutants(u, N)):
        if isinstance(y, FromFinite):
            n = min(N, len(y.word))
            cases.append(ProbeCase(label, REJECTED, abelian_member(y.word[:n], u, L)))
        else:
            cases.append(ProbeCase(label, REJECTED, abelian_member(y, u, L, N)))
    return ProbeReport("fm-4letter", tuple(cases))


@dataclass(frozen=True)
class ARReport:
    member: MembershipVerdict
    absent_factor: Optional[str]
    self_member: MembershipVerdict

    @property
    def ok(self) -> bool:
        return self.member.member and self.absent_factor is not None and self.self_member.member

    def to_dict(self):
        return {"schema": 1, "ok": self.ok, "member": self.member.to_dict(),
                "absent_factor": self.absent_factor, "self_member": self.self_member.to_dict()}


def ar_closure_probe(c: ArnouxRauzy, L: int, N: int, max_absent: int = 10) -> ARReport:
    """20c lies in A(c) up to L yet has a short factor outside L(c)."""
    if not letters_of_directive_ok(c.directive):
        raise SpecError("directive must have a prefix of the form 0{0,1}*1{0,1}*2")
    y = Prepend("20", c)
    verdict = abelian_member(y, c, L, N)
    absent = None
    yw = FiniteWord(y.prefix(N), y.alphabet)
    for n in range(1, max_absent + 1):
        have = factor_set(c, n, N)
        head = yw.symbols[: n + 2].tobytes()
        # only factors touching the prepended letters can be new
        for i in range(0, 2):
            f = head[i:i + n]
            if len(f) == n and f not in have:
                absent = y.alphabet.render(np.frombuffer(f, dtype=np.uint8))
                break
        if absent:
            break
    return ARReport(verdict, absent, abelian_member(c, c, L, N))
