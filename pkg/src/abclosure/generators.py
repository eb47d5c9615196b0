"""Infinite-word families: morphic fixed points, rotation codings,
interleavings, Arnoux-Rauzy words, Champernowne words and friends.

Rotation codings run on exact integer arithmetic over a common denominator:
a point is ``(A + B*sqrt(D)) / Q`` and every letter is decided by sign tests.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .exactnum import QuadExt, floor_of, qe_compare, reduce_mod1, sign_of
from .words import Alphabet, FiniteWord, InfiniteWord, WindowError, window_of

__all__ = [
    "MorphismSpec", "BinaryRotationSpec", "TernaryRotationSpec", "InterleaveSpec",
    "Periodic", "MorphicFixedPoint", "MorphicImage", "BinaryRotationWord",
    "TernaryRotationWord", "Interleave", "ArnouxRauzy", "Champernowne",
    "Prepend", "Shift", "FromFinite",
    "morphic_fixed_point", "binary_rotation_word", "ternary_rotation_word",
    "interleave", "is_constant_gap", "palindromic_closure", "arnoux_rauzy",
    "champernowne", "reversal_prefix", "fm_min_complexity_word", "apply_morphism",
    "thue_morse", "fibonacci", "tribonacci", "periodic", "preperiodic",
]


class SpecError(ValueError):
    """Invalid generator parameters."""


# ---------------------------------------------------------------------------
# periodic and finite-derived words

class Periodic(InfiniteWord):
    """u v v v ... (purely periodic when u is empty)."""

    def __init__(self, period: str, preperiod: str = "", alphabet: Optional[Alphabet] = None):
        if not period:
            raise SpecError("period must be non-empty")
        alphabet = alphabet or Alphabet.of(period + preperiod)
        name = f"periodic({period})" if not preperiod else f"preperiodic({preperiod},{period})"
        super().__init__(alphabet, name, {"period": period, "preperiod": preperiod})
        self.period_word = alphabet.encode(period)
        self.preperiod_word = alphabet.encode(preperiod)

    def _generate(self, n):
        reps = -(-max(n - len(self.preperiod_word), 0) // len(self.period_word)) + 1
        return np.concatenate([self.preperiod_word, np.tile(self.period_word, reps)])


def periodic(period: str, alphabet: Optional[Alphabet] = None) -> Periodic:
    return Periodic(period, "", alphabet)


def preperiodic(preperiod: str, period: str, alphabet: Optional[Alphabet] = None) -> Periodic:
    return Periodic(period, preperiod, alphabet)


class FromFinite(InfiniteWord):
    """Wrap a long finite word; asking beyond it is an error."""

    def __init__(self, word: FiniteWord, name: str = "finite"):
        super().__init__(word.alphabet, name)
        self.word = word

    def _generate(self, n):
        # the buffer may ask for more than needed; hand back what exists
        return self.word.symbols

    def prefix(self, n: int) -> np.ndarray:
        if n > len(self.word):
            raise WindowError(f"{self.name}: only {len(self.word)} letters are known, asked for {n}")
        return super().prefix(n)


class Prepend(InfiniteWord):
    def __init__(self, head: str, x: InfiniteWord):
        alphabet = x.alphabet.union(Alphabet.of(head)) if head else x.alphabet
        super().__init__(alphabet, f"prepend({head};{x.name})")
        self.head = alphabet.encode(head)
        self.x = x

    def _generate(self, n):
        tail = self.x.alphabet.translate(self.x.prefix(max(n - len(self.head), 0)), self.alphabet)
        return np.concatenate([self.head, tail])


class Shift(InfiniteWord):
    def __init__(self, x: InfiniteWord, k: int):
        super().__init__(x.alphabet, f"shift({x.name};{k})")
        self.x, self.k = x, k

    def _generate(self, n):
        return self.x.prefix(n + self.k)[self.k:]


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class MorphismSpec:
    mapping: Mapping[str, str]
    start: str = ""

    def check_prolongable(self):
        img = self.mapping.get(self.start)
        if img is None:
            raise SpecError(f"start letter {self.start!r} has no image")
        if len(img) < 2 or img[0] != self.start:
            raise SpecError(f"morphism is not prolongable on {self.start!r}: {self.start}->{img}")


def _image_table(mapping: Mapping[str, str], src: Alphabet, dst: Alphabet):
    lens = np.array([len(mapping[a]) for a in src.names], dtype=np.int64)
    width = max(1, int(lens.max()))
    table = np.zeros((len(src), width), dtype=np.uint8)
    for i, a in enumerate(src.names):
        table[i, : lens[i]] = dst.encode(mapping[a])
    mask = np.arange(width)[None, :] < lens[:, None]
    return table, mask, lens


def _apply(word: np.ndarray, table, mask) -> np.ndarray:
    return table[word][mask[word]]


class MorphicFixedPoint(InfiniteWord):
    def __init__(self, spec: MorphismSpec, name: str = ""):
        spec.check_prolongable()
        letters = set(spec.mapping) | set("".join(spec.mapping.values()))
        missing = letters - set(spec.mapping)
        if missing:
            raise SpecError(f"letters without an image: {sorted(missing)}")
        alphabet = Alphabet.of(letters)
        super().__init__(alphabet, name or _morphism_name(spec), {"start": spec.start})
        self.spec = spec
        self._table, self._mask, _ = _image_table(spec.mapping, alphabet, alphabet)
        self._word = alphabet.encode(spec.start)

    def _generate(self, n):
        w = self._word
        while len(w) < n:
            nxt = _apply(w, self._table, self._mask)
            if len(nxt) <= len(w):
                raise SpecError("morphism iterates stopped growing")
            w = nxt
        self._word = w
        return w


def _morphism_name(spec: MorphismSpec) -> str:
    body = ",".join(f"{a}->{b}" for a, b in sorted(spec.mapping.items()))
    return f"morphic({body}; start={spec.start})"


def morphic_fixed_point(spec: MorphismSpec) -> InfiniteWord:
    return MorphicFixedPoint(spec)


class MorphicImage(InfiniteWord):
    """phi(x) for a non-erasing morphism phi."""

    def __init__(self, x: InfiniteWord, mapping: Mapping[str, str], alphabet: Optional[Alphabet] = None,
                 name: str = ""):
        for a in x.alphabet.names:
            if not mapping.get(a):
                raise SpecError(f"letter {a!r} must have a non-empty image")
        alphabet = alphabet or Alphabet.of("".join(mapping[a] for a in x.alphabet.names))
        super().__init__(alphabet, name or f"image({x.name})", {"mapping": dict(mapping)})
        self.x = x
        self._table, self._mask, self._lens = _image_table(
            {a: mapping[a] for a in x.alphabet.names}, x.alphabet, alphabet)

    def _generate(self, n):
        m = max(1, n // int(self._lens.min()) + 1)
        return _apply(self.x.prefix(m), self._table, self._mask)


def apply_morphism(x: InfiniteWord, mapping: Mapping[str, str], name: str = "") -> InfiniteWord:
    return MorphicImage(x, mapping, name=name)


def thue_morse() -> InfiniteWord:
    return MorphicFixedPoint(MorphismSpec({"0": "01", "1": "10"}, "0"), name="tm")


def fibonacci() -> InfiniteWord:
    return MorphicFixedPoint(MorphismSpec({"0": "01", "1": "0"}, "0"), name="fib")


def tribonacci() -> InfiniteWord:
    return MorphicFixedPoint(MorphismSpec({"0": "01", "1": "02", "2": "0"}, "0"), name="trib")


# ---------------------------------------------------------------------------
# rotation codings

class _Scaled:
    """Common-denominator integer representation of a family of field elements."""

    def __init__(self, values: Sequence[QuadExt]):
        d = 0
        for v in values:
            if v.D:
                if d and v.D != d:
                    raise SpecError("rotation parameters live in different quadratic fields")
                d = v.D
        self.D = d
        self.Q = math.lcm(*(f.denominator for v in values for f in (v.q0, v.q1)))

    def __call__(self, v: QuadExt):
        return (v.q0 * self.Q).numerator, (v.q1 * self.Q).numerator


class _Arc:
    """Integer-arithmetic circle arc with endpoint flags (mirrors CircleInterval)."""

    def __init__(self, sc: _Scaled, start: QuadExt, end: QuadExt, inc_start: bool, inc_end: bool):
        s = reduce_mod1(start).value
        e = reduce_mod1(end).value
        if e.sign() == 0:
            e = QuadExt(1)
        length = e - s if (e - s).sign() > 0 else e - s + 1
        self.sc = sc
        self.s = sc(s)
        self.len = sc(length)
        self.full = length == 1
        self.inc_start, self.inc_end = inc_start, inc_end

    def contains(self, a: int, b: int) -> bool:
        D, Q = self.sc.D, self.sc.Q
        da, db = a - self.s[0], b - self.s[1]
        if sign_of(da, db, D) < 0:
            da += Q
        if da == 0 and (db == 0 or D == 0):
            return self.inc_start or (self.full and self.inc_end)
        c = sign_of(da - self.len[0], db - self.len[1], D)
        if c < 0:
            return True
        if c == 0:
            return self.inc_end
        return False


def _orbit(sc: _Scaled, rho: QuadExt, alpha: QuadExt, n: int):
    """Yield (A, B) numerators of R_alpha^i(rho), i = 0..n-1, reduced into [0, Q)."""
    D, Q = sc.D, sc.Q
    a, b = sc(reduce_mod1(rho).value)
    da, db = sc(alpha)
    for _ in range(n):
        yield a, b
        a += da
        b += db
        f = floor_of(a, b, D, Q)
        a -= f * Q


@dataclass(frozen=True)
class BinaryRotationSpec:
    alpha: QuadExt
    rho: QuadExt = QuadExt(0)
    convention: str = "under"

    def __post_init__(self):
        object.__setattr__(self, "alpha", QuadExt.coerce(self.alpha))
        object.__setattr__(self, "rho", reduce_mod1(self.rho).value)
        if self.convention not in ("under", "bar"):
            raise SpecError("convention must be 'under' or 'bar'")
        if not (self.alpha.sign() > 0 and qe_compare(self.alpha, 1) < 0):
            raise SpecError("slope must satisfy 0 < alpha < 1")

    def one_interval(self):
        """(start, end, include_start, include_end) of I_1 = I(1 - alpha, 1)."""
        under = self.convention == "under"
        return 1 - self.alpha, QuadExt(1), under, not under


class BinaryRotationWord(InfiniteWord):
    def __init__(self, spec: BinaryRotationSpec, name: str = ""):
        super().__init__(Alphabet.range(2), name or (
            f"sturmian(alpha={spec.alpha}, rho={spec.rho}, conv={spec.convention})"),
            {"alpha": spec.alpha, "rho": spec.rho, "conv": spec.convention})
        self.spec = spec
        self._sc = _Scaled([spec.alpha, spec.rho])
        self._i1 = _Arc(self._sc, *spec.one_interval())

    def _generate(self, n):
        return np.fromiter((self._i1.contains(a, b)
                            for a, b in _orbit(self._sc, self.spec.rho, self.spec.alpha, n)),
                           dtype=np.uint8, count=n)


def binary_rotation_word(spec: BinaryRotationSpec) -> InfiniteWord:
    return BinaryRotationWord(spec)


@dataclass(frozen=True)
class TernaryRotationSpec:
    """Slope alpha < 1/2, offset zeta in [alpha, 1 - alpha], intercept rho.

    ``one_in_j1``: J_1 = I(1 - alpha, 1) contains 1 (else it contains 1 - alpha).
    ``zeta_in_j2``: J_2 = I(zeta - alpha, zeta) contains zeta (else zeta - alpha).
    """

    alpha: QuadExt
    zeta: QuadExt
    rho: QuadExt = QuadExt(0)
    one_in_j1: bool = False
    zeta_in_j2: bool = False

    def __post_init__(self):
        alpha = QuadExt.coerce(self.alpha)
        zeta = reduce_mod1(self.zeta).value
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "rho", reduce_mod1(self.rho).value)
        if not (alpha.sign() > 0 and qe_compare(2 * alpha, 1) < 0):
            raise SpecError("ternary coding needs 0 < alpha < 1/2")
        if zeta < alpha or zeta > 1 - alpha:
            raise SpecError(f"offset zeta={zeta} must lie in [alpha, 1 - alpha]")
        if zeta == alpha and self.one_in_j1 and not self.zeta_in_j2:
            raise SpecError("t_{bar alpha, under alpha} is not defined: J_1 and J_2 would overlap")
        if zeta == 1 - alpha and not self.one_in_j1 and self.zeta_in_j2:
            raise SpecError("t_{under alpha, bar(1-alpha)} is not defined: J_1 and J_2 would overlap")

    def intervals(self):
        """Arc data (start, end, inc_start, inc_end) for J_1 and J_2."""
        j1 = (1 - self.alpha, QuadExt(1), not self.one_in_j1, self.one_in_j1)
        j2 = (self.zeta - self.alpha, self.zeta, not self.zeta_in_j2, self.zeta_in_j2)
        return j1, j2

    def with_(self, **kw) -> "TernaryRotationSpec":
        d = dict(alpha=self.alpha, zeta=self.zeta, rho=self.rho,
                 one_in_j1=self.one_in_j1, zeta_in_j2=self.zeta_in_j2)
        d.update(kw)
        return TernaryRotationSpec(**d)

    def __str__(self):
        return (f"ternary(alpha={self.alpha}, zeta={self.zeta}, rho={self.rho}, "
                f"one_in_j1={str(self.one_in_j1).lower()}, zeta_in_j2={str(self.zeta_in_j2).lower()})")


class TernaryRotationWord(InfiniteWord):
    def __init__(self, spec: TernaryRotationSpec, name: str = ""):
        super().__init__(Alphabet.range(3), name or str(spec),
                         {"alpha": spec.alpha, "zeta": spec.zeta, "rho": spec.rho})
        self.spec = spec
        self._sc = _Scaled([spec.alpha, spec.zeta, spec.rho])
        j1, j2 = spec.intervals()
        self._j1 = _Arc(self._sc, *j1)
        self._j2 = _Arc(self._sc, *j2)

    def _code(self, a, b):
        if self._j1.contains(a, b):
            return 1
        if self._j2.contains(a, b):
            return 2
        return 0

    def _generate(self, n):
        return np.fromiter((self._code(a, b)
                            for a, b in _orbit(self._sc, self.spec.rho, self.spec.alpha, n)),
                           dtype=np.uint8, count=n)


def ternary_rotation_word(spec: TernaryRotationSpec) -> InfiniteWord:
    return TernaryRotationWord(spec)


# ---------------------------------------------------------------------------
# interleaving

@dataclass(frozen=True)
class InterleaveSpec:
    backbone: InfiniteWord
    z0: InfiniteWord
    z1: InfiniteWord


class Interleave(InfiniteWord):
    """Replace the n-th 0 of the backbone by z0[n] and the n-th 1 by z1[n]."""

    def __init__(self, spec: InterleaveSpec, name: str = ""):
        if len(spec.backbone.alphabet) != 2:
            raise SpecError("interleave backbone must be binary")
        alphabet = spec.z0.alphabet.union(spec.z1.alphabet)
        super().__init__(alphabet, name or f"interleave({spec.backbone.name}; {spec.z0.name}; {spec.z1.name})")
        self.spec = spec

    def _generate(self, n):
        x = self.spec.backbone.prefix(n)
        ones = x.astype(bool)
        n1 = int(ones.sum())
        z0 = self.spec.z0.alphabet.translate(self.spec.z0.prefix(n - n1), self.alphabet)
        z1 = self.spec.z1.alphabet.translate(self.spec.z1.prefix(n1), self.alphabet)
        out = np.empty(n, dtype=np.uint8)
        out[~ones] = z0
        out[ones] = z1
        return out


def interleave(spec: InterleaveSpec) -> InfiniteWord:
    return Interleave(spec)


def is_constant_gap(z, N: Optional[int] = None) -> bool:
    w = window_of(z, N)
    for a in np.unique(w):
        pos = np.flatnonzero(w == a)
        if len(pos) > 2 and len(np.unique(np.diff(pos))) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# palindromic closure and Arnoux-Rauzy words

def _longest_palindromic_suffix(w: list) -> int:
    # border of rev(w) # w via the KMP failure function
    s = w[::-1] + [-1] + w
    pi = [0] * len(s)
    k = 0
    for i in range(1, len(s)):
        while k and s[i] != s[k]:
            k = pi[k - 1]
        if s[i] == s[k]:
            k += 1
        pi[i] = k
    return pi[-1]


def _closure_list(w: list) -> list:
    if not w:
        return []
    p = _longest_palindromic_suffix(w)
    return w + w[: len(w) - p][::-1]


def palindromic_closure(u) -> FiniteWord:
    """Shortest palindrome having u as a prefix."""
    if isinstance(u, str):
        u = FiniteWord.from_str(u)
    return FiniteWord(_closure_list(u.symbols.tolist()), u.alphabet)


class DirectiveExhausted(ValueError):
    pass


class ArnouxRauzy(InfiniteWord):
    """psi(directive): iterated right palindromic closure."""

    def __init__(self, directive: InfiniteWord, max_directive: int = 1 << 16, name: str = ""):
        super().__init__(directive.alphabet, name or f"ar(directive={directive.name})")
        self.directive = directive
        self.max_directive = max_directive

    def _generate(self, n):
        w: list = []
        consumed = 0
        while len(w) < n:
            if consumed >= self.max_directive:
                raise DirectiveExhausted(
                    f"directive window of {self.max_directive} letters exhausted before the "
                    f"prefix reached length {n}; supply a longer directive window")
            a = int(self.directive.prefix(consumed + 1)[consumed])
            consumed += 1
            w = _closure_list(w + [a])
        self._check_letters(max(consumed, 1))
        return np.asarray(w, dtype=np.uint8)

    def _check_letters(self, consumed: int):
        # every letter must show up in the directive; look ahead past the consumed part
        k = len(self.alphabet)
        window = max(consumed, min(self.max_directive, 4 * consumed + 64))
        seen = set(np.unique(self.directive.prefix(window)).tolist())
        if len(seen) < k:
            missing = [self.alphabet.names[i] for i in range(k) if i not in seen]
            raise DirectiveExhausted(
                f"letters {missing} never occur in the first {window} directive letters; every "
                "letter must occur infinitely often (supply a longer directive window if they "
                "occur later)")


def arnoux_rauzy(directive: InfiniteWord, n: int, max_directive: int = 1 << 16) -> FiniteWord:
    return ArnouxRauzy(directive, max_directive).finite(n)


# ---------------------------------------------------------------------------
# Champernowne, reversal, minimal-complexity words

class Champernowne(InfiniteWord):
    def __init__(self, k: int = 2):
        if k < 2:
            raise SpecError("Champernowne word needs k >= 2")
        super().__init__(Alphabet.range(k), f"champ({k})", {"k": k})
        self.k = k

    def _generate(self, n):
        out = []
        length = 1
        while len(out) < n:
            for t in itertools.product(range(self.k), repeat=length):
                out.extend(t)
                if len(out) >= n:
                    break
            length += 1
        return np.asarray(out, dtype=np.uint8)


def champernowne(k: int) -> InfiniteWord:
    return Champernowne(k)


def reversal_prefix(x, N: int) -> FiniteWord:
    """Reversal of prefix(N): a finite approximant of the reversed word."""
    return FiniteWord(window_of(x, N)[::-1], x.alphabet)


def fm_min_complexity_word(E: str, F: str, G: str, s: InfiniteWord) -> InfiniteWord:
    """sigma(s) with 0 -> G E and 1 -> G F (G, E, F as letter strings)."""
    e, f, g = list(E), list(F), list(G)
    if not g:
        raise SpecError("G must be non-empty")
    if not (e or f):
        raise SpecError("E and F cannot both be empty")
    allx = e + f + g
    if len(set(allx)) != len(allx):
        raise SpecError("E, F, G must be pairwise disjoint sets of distinct letters")
    if len(s.alphabet) != 2:
        raise SpecError("fm construction needs a binary backbone")
    mapping = {"0": G + E, "1": G + F}
    return MorphicImage(s, mapping, Alphabet.of(allx), name=f"fm(G={G}; E={E}; F={F}; s={s.name})")


def letters_of_directive_ok(directive: InfiniteWord, n: int = 4096) -> bool:
    """Directive has a prefix of the form 0{0,1}*1{0,1}*2 (in first-occurrence order)."""
    w = directive.render(n)
    if len(directive.alphabet) < 3:
        return False
    first = []
    for c in w:
        if c not in first:
            first.append(c)
        if len(first) == 3:
            break
    if len(first) < 3:
        return False
    a, b, c = (re.escape(t) for t in first)
    return re.match(f"{a}[{a}{b}]*{b}[{a}{b}]*{c}", w) is not None
