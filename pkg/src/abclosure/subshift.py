"""Subshifts given by forbidden factors, and the abelian closures of a few of them.

Bi-infinite words are never materialized.  A finite word is *bi-extendable at
horizon H* when some ``u w v`` with ``|u| = |v| = H`` is legal; the language of
the subshift is approximated by these words, and every answer that depends on
it carries the horizon.

Legality is decided by a scanner: the set of live runs of the forbidden-word
automaton, one run started at each position.  Scanner states are hashable, so
the scanner is itself a (lazily built) DFA and all the horizon computations
are breadth-first searches over it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "ForbiddenSet", "BoundedLanguage", "LegalVerdict", "legal", "bounded_language",
    "minimal_forbidden", "abelian_legal", "sft_counterexample_report",
    "binary_sft_counterexample_report", "nonsofic_witness", "parse_forbidden",
    "golden_mean", "three_letter", "four_letter", "binary_order6", "FIXTURES",
]

_ILLEGAL = None  # scanner sink


@dataclass
class ForbiddenSet:
    """Either a finite list of words or a complete DFA accepting the forbidden words."""

    alphabet: Tuple[str, ...]
    words: Optional[Tuple[str, ...]] = None
    states: Tuple[str, ...] = ()
    start: str = ""
    accept: FrozenSet[str] = frozenset()
    trans: Dict[Tuple[str, str], str] = field(default_factory=dict)
    name: str = "F"

    def __post_init__(self):
        self.alphabet = tuple(sorted(set(self.alphabet)))
        if self.words is not None:
            ws = sorted(set(self.words), key=lambda w: (len(w), w))
            bad = [w for w in ws if any(c not in self.alphabet for c in w)]
            if bad:
                raise ValueError(f"forbidden words use letters outside the alphabet: {bad}")
            kept = [w for w in ws if not any(v != w and v in w for v in ws)]
            self.words = tuple(kept)
            self._build_trie()
        else:
            missing = [(s, a) for s in self.states for a in self.alphabet if (s, a) not in self.trans]
            if missing:
                raise ValueError(f"automaton is not complete: no transition for {missing[:4]}")
            if self.start not in self.states or not set(self.accept) <= set(self.states):
                raise ValueError("start/accept states must be declared")
        self._prune_dead()
        self._scan_cache: dict = {}
        self._horizon_cache: dict = {}

    @classmethod
    def finite(cls, words: Iterable[str], alphabet: Iterable[str], name: str = "F") -> "ForbiddenSet":
        return cls(tuple(alphabet), tuple(words), name=name)

    @property
    def is_finite(self) -> bool:
        return self.words is not None

    def _build_trie(self):
        # plain trie (runs start at every position in the scanner, so no failure links)
        states, trans, accept = ["", "#dead"], {}, set()
        for w in self.words:
            for i in range(1, len(w) + 1):
                if w[:i] not in states:
                    states.append(w[:i])
            accept.add(w)
        for s in states:
            for a in self.alphabet:
                t = s + a
                trans[(s, a)] = t if (s != "#dead" and s not in accept and t in states) else "#dead"
        self.states, self.start, self.accept, self.trans = tuple(states), "", frozenset(accept), trans

    def _prune_dead(self):
        # states from which no accepting state is reachable never matter
        live = set(self.accept)
        changed = True
        while changed:
            changed = False
            for (s, a), t in self.trans.items():
                if t in live and s not in live:
                    live.add(s)
                    changed = True
        self._live = frozenset(live)

    # -- scanner ---------------------------------------------------------

    def scan_start(self):
        return frozenset([self.start]) & self._live

    def scan_step(self, S, a: str):
        key = (S, a)
        hit = self._scan_cache.get(key, 0)
        if hit != 0:
            return hit
        if S is _ILLEGAL:
            out = _ILLEGAL
        else:
            nxt = {self.trans[(q, a)] for q in S | {self.start}}
            out = _ILLEGAL if nxt & self.accept else frozenset(nxt & self._live)
        self._scan_cache[key] = out
        return out

    def run(self, w: str, S=None):
        S = self.scan_start() if S is None else S
        if self.start in self.accept:
            return _ILLEGAL
        for a in w:
            S = self.scan_step(S, a)
            if S is _ILLEGAL:
                return _ILLEGAL
        return S

    # -- horizon data ----------------------------------------------------

    def horizon(self, H: int) -> "_Horizon":
        h = self._horizon_cache.get(H)
        if h is None:
            h = _Horizon(self, H)
            self._horizon_cache[H] = h
        return h

    def to_automaton_text(self) -> str:
        lines = ["alphabet " + " ".join(self.alphabet), "states " + " ".join(self.states),
                 f"start {self.start}", "accept " + " ".join(sorted(self.accept))]
        lines += [f"trans {s} {a} {t}" for (s, a), t in sorted(self.trans.items())]
        return "\n".join(lines) + "\n"

    def as_automaton(self) -> "ForbiddenSet":
        """The same forbidden set presented as an automaton (trie states renamed)."""
        ren = {s: (f"q{i}") for i, s in enumerate(self.states)}
        return ForbiddenSet(self.alphabet, None, tuple(ren.values()), ren[self.start],
                            frozenset(ren[s] for s in self.accept),
                            {(ren[s], a): ren[t] for (s, a), t in self.trans.items()},
                            name=self.name + "-dfa")


class _Horizon:
    """Scanner states reachable by H legal letters, and those with H legal letters ahead."""

    def __init__(self, F: ForbiddenSet, H: int):
        self.F, self.H = F, H
        start = F.scan_start()
        reach = {start}
        for _ in range(H):
            reach = {t for S in reach for a in F.alphabet
                     if (t := F.scan_step(S, a)) is not _ILLEGAL}
        self.reach = frozenset(reach)
        # right-extendable states: closed backwards over H steps
        all_states = self._all_states(start)
        ext = set(all_states)
        for _ in range(H):
            ext = {S for S in all_states
                   if any((t := F.scan_step(S, a)) is not _ILLEGAL and t in ext for a in F.alphabet)}
        self.ext = frozenset(ext)
        self._parikh: dict = {}

    def _all_states(self, start):
        seen, todo = {start}, [start]
        while todo:
            S = todo.pop()
            for a in self.F.alphabet:
                t = self.F.scan_step(S, a)
                if t is not _ILLEGAL and t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def bi_extendable(self, w: str) -> bool:
        for S in self.reach:
            T = self.F.run(w, S)
            if T is not _ILLEGAL and T in self.ext:
                return True
        return False

    def parikh_set(self, n: int) -> FrozenSet[tuple]:
        """Parikh vectors of the bi-extendable words of length n."""
        got = self._parikh.get(n)
        if got is not None:
            return got
        k = len(self.F.alphabet)
        layer = {(S, (0,) * k) for S in self.reach}
        for _ in range(n):
            nxt = set()
            for S, p in layer:
                for i, a in enumerate(self.F.alphabet):
                    t = self.F.scan_step(S, a)
                    if t is not _ILLEGAL:
                        q = list(p)
                        q[i] += 1
                        nxt.add((t, tuple(q)))
            layer = nxt
        out = frozenset(p for S, p in layer if S in self.ext)
        self._parikh[n] = out
        return out


# ---------------------------------------------------------------------------
# operations

def legal(w: str, F: ForbiddenSet) -> bool:
    """No factor of w is forbidden."""
    w = str(w)
    if F.is_finite:
        return not any(f in w for f in F.words)
    return F.run(w) is not _ILLEGAL


@dataclass
class BoundedLanguage:
    L: int
    horizon: int
    words: Dict[int, Tuple[str, ...]]
    bi_extendable: Dict[int, FrozenSet[str]]

    def count(self, n: int) -> int:
        return len(self.words[n])

    def to_dict(self):
        return {"schema": 1, "L": self.L, "horizon": self.horizon,
                "words": {str(n): [{"word": w, "bi_extendable": w in self.bi_extendable[n]}
                                   for w in ws] for n, ws in self.words.items()}}


def bounded_language(F: ForbiddenSet, L: int, horizon: Optional[int] = None) -> BoundedLanguage:
    """All legal words of length <= L, tagged with bi-extendability at the horizon (default L)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    H = L if horizon is None else horizon
    hz = F.horizon(H)
    words = {0: ("",)}
    layer = [("", F.scan_start())] if F.run("") is not _ILLEGAL else []
    for n in range(1, L + 1):
        nxt = []
        for w, S in layer:
            for a in F.alphabet:
                T = F.scan_step(S, a)
                if T is not _ILLEGAL:
                    nxt.append((w + a, T))
        layer = nxt
        words[n] = tuple(w for w, _ in layer)
    bi = {n: frozenset(w for w in ws if hz.bi_extendable(w)) for n, ws in words.items()}
    return BoundedLanguage(L, H, words, bi)


@dataclass(frozen=True)
class LegalVerdict:
    value: bool
    horizon: int
    witness: Optional[str] = None

    def __bool__(self):
        return self.value


def abelian_legal(w: str, F: ForbiddenSet, L: int) -> LegalVerdict:
    """Every factor of w is abelian equivalent to a word bi-extendable at horizon L."""
    w = str(w)
    if len(w) > L:
        raise ValueError(f"|w| = {len(w)} exceeds the horizon {L}")
    hz = F.horizon(L)
    idx = {a: i for i, a in enumerate(F.alphabet)}
    for n in range(1, len(w) + 1):
        allowed = hz.parikh_set(n)
        for i in range(len(w) - n + 1):
            p = [0] * len(F.alphabet)
            for c in w[i:i + n]:
                p[idx[c]] += 1
            if tuple(p) not in allowed:
                return LegalVerdict(False, L, w[i:i + n])
    return LegalVerdict(True, L)


def minimal_forbidden(F: ForbiddenSet, L: int, abelian: bool = False,
                      horizon: Optional[int] = None) -> set:
    """Minimal forbidden words of length <= L of the subshift (or of its abelian
    closure when ``abelian``): w outside the language with w[1:] and w[:-1] inside."""
    H = L if horizon is None else horizon
    hz = F.horizon(H)
    if abelian:
        def inside(w):
            return bool(abelian_legal(w, F, H))
    else:
        def inside(w):
            return F.run(w) is not _ILLEGAL and hz.bi_extendable(w)
    out = set()
    lang = [""]
    for n in range(1, L + 1):
        nxt = []
        for u in lang:
            for a in F.alphabet:
                w = u + a
                if not inside(w[1:]):
                    continue
                if inside(w):
                    nxt.append(w)
                else:
                    out.add(w)
        lang = nxt
    return out


@dataclass
class Report:
    name: str
    ok: bool
    fields: dict

    def to_dict(self):
        return {"schema": 1, "report": self.name, "ok": self.ok, **self.fields}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def sft_counterexample_report(n: int, F: Optional[ForbiddenSet] = None) -> Report:
    """c^K ab c^n ba c^K (K = n+2): short factors all abelian-legal, yet b c^n b is not."""
    if n < 1:
        raise ValueError("n must be >= 1")
    F = F or three_letter()
    K = n + 2
    H = n + 2
    frag = "c" * K + "ab" + "c" * n + "ba" + "c" * K
    bad_short = None
    for m in range(1, n + 1):
        for i in range(len(frag) - m + 1):
            if not abelian_legal(frag[i:i + m], F, H):
                bad_short = frag[i:i + m]
                break
        if bad_short:
            break
    witness = "b" + "c" * n + "b"
    rejected = not abelian_legal(witness, F, H)
    minimal = bool(abelian_legal(witness[1:], F, H)) and bool(abelian_legal(witness[:-1], F, H))
    ok = bad_short is None and rejected and minimal and witness in frag
    return Report("sft-counterexample", ok, {
        "n": n, "horizon": H, "fragment": frag, "short_factors_abelian_legal": bad_short is None,
        "first_bad_short_factor": bad_short, "witness": witness, "witness_rejected": rejected,
        "witness_minimal": minimal})


def binary_sft_counterexample_report(k: int = 2, reps: int = 4, horizon: int = 24) -> Report:
    """Order-6 binary SFT: ^w(0011) 0 (0011)^w passes, while two inserted 0s
    separated by (0011)^k produce a factor that is not abelian-legal."""
    F = binary_order6()
    H = horizon
    good = "0011" * reps + "0" + "0011" * reps
    bad = "0011" * reps + "0" + "0011" * k + "0" + "0011" * reps
    good_v = _all_factors_abelian_legal(good, F, H)
    bad_v = _all_factors_abelian_legal(bad, F, H)
    return Report("binary-sft-counterexample", good_v.value and not bad_v.value, {
        "k": k, "horizon": H, "accepted_fragment": good, "accepted": good_v.value,
        "rejected_fragment": bad, "rejected": not bad_v.value, "witness": bad_v.witness})


def _all_factors_abelian_legal(w: str, F: ForbiddenSet, H: int) -> LegalVerdict:
    """abelian_legal over every window of length <= H of a longer word (shortest failure first)."""
    for m in range(1, min(H, len(w)) + 1):
        for i in range(len(w) - m + 1):
            v = abelian_legal(w[i:i + m], F, H)
            if not v:
                return LegalVerdict(False, H, w[i:i + m])
    return LegalVerdict(True, H)


def nonsofic_witness(L: int, horizon: Optional[int] = None) -> set:
    """Words cwd (w in {a,b}^{<=L}) minimal forbidden for the closure of the four-letter shift."""
    if L < 1:
        raise ValueError("L must be >= 1")
    F = four_letter()
    H = horizon if horizon is not None else L + 2
    out = set()
    for n in range(L + 1):
        for t in itertools.product("ab", repeat=n):
            w = "".join(t)
            cwd = "c" + w + "d"
            if (not abelian_legal(cwd, F, H) and abelian_legal("c" + w, F, H)
                    and abelian_legal(w + "d", F, H)):
                out.add(cwd)
    return out


def unbalanced_count(n: int) -> int:
    """|{w in {a,b}^n : |w|_a != |w|_b}|."""
    return 2 ** n - (comb(n, n // 2) if n % 2 == 0 else 0)


# ---------------------------------------------------------------------------
# text format

def parse_forbidden(text: str, name: str = "F") -> ForbiddenSet:
    """One forbidden word per line, or an automaton block::

        alphabet a b c
        states s0 s1
        start s0
        accept s1
        trans s0 a s1
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    keywords = {"alphabet", "states", "start", "accept", "trans"}
    if any(ln.split()[0] in keywords and len(ln.split()) > 1 for ln in lines) and \
            any(ln.startswith("trans ") for ln in lines):
        alphabet, states, start, accept, trans = None, [], None, [], {}
        for no, ln in enumerate(lines, 1):
            head, *rest = ln.split()
            if head == "alphabet":
                alphabet = rest
            elif head == "states":
                states = rest
            elif head == "start" and len(rest) == 1:
                start = rest[0]
            elif head == "accept":
                accept = rest
            elif head == "trans" and len(rest) == 3:
                trans[(rest[0], rest[1])] = rest[2]
            else:
                raise ValueError(f"line {no}: cannot parse automaton line {ln!r}")
        if alphabet is None:
            alphabet = sorted({a for _, a in trans})
        if not states:
            states = sorted({s for s, _ in trans} | set(trans.values()))
        if start is None:
            raise ValueError("automaton block needs a start state")
        return ForbiddenSet(tuple(alphabet), None, tuple(states), start, frozenset(accept), trans,
                            name=name)
    alphabet = None
    words = []
    for ln in lines:
        if ln.startswith("alphabet "):
            alphabet = ln.split()[1:]
        else:
            words.extend(ln.split())
    if alphabet is None:
        alphabet = sorted(set("".join(words)))
    return ForbiddenSet.finite(words, alphabet, name=name)


# ---------------------------------------------------------------------------
# fixtures

def golden_mean() -> ForbiddenSet:
    return ForbiddenSet.finite(["11"], "01", name="golden-mean")


def three_letter() -> ForbiddenSet:
    """Walks on the graph a -> b -> c -> a, c -> c."""
    return ForbiddenSet.finite(["aa", "ac", "ba", "bb", "cb"], "abc", name="three-letter")


_FOUR_LETTER = """
# {a,b,d}c  u  d{a,b,c}  u  c R d  with R = {a,b}* minus (ab)*
alphabet a b c d
states s0 A D C0 C1 CBAD ACC DEAD
start s0
accept ACC
trans s0 a A
trans s0 b A
trans s0 c C0
trans s0 d D
trans A a DEAD
trans A b DEAD
trans A c ACC
trans A d DEAD
trans D a ACC
trans D b ACC
trans D c ACC
trans D d DEAD
trans C0 a C1
trans C0 b CBAD
trans C0 c DEAD
trans C0 d DEAD
trans C1 a CBAD
trans C1 b C0
trans C1 c DEAD
trans C1 d ACC
trans CBAD a CBAD
trans CBAD b CBAD
trans CBAD c DEAD
trans CBAD d ACC
trans ACC a DEAD
trans ACC b DEAD
trans ACC c DEAD
trans ACC d DEAD
trans DEAD a DEAD
trans DEAD b DEAD
trans DEAD c DEAD
trans DEAD d DEAD
"""


def four_letter() -> ForbiddenSet:
    """The sofic shift whose abelian closure is not sofic (regular forbidden set)."""
    return parse_forbidden(_FOUR_LETTER, name="four-letter")


def binary_order6() -> ForbiddenSet:
    """Order-6 binary SFT reconstructed from its description: the allowed 6-blocks
    are those of ^w(0011)(000111)^w, giving two cycles ((0011)^w and (000111)^w)
    joined by a one-way path."""
    w = "0011" * 6 + "000111" * 6
    allowed = {w[i:i + 6] for i in range(len(w) - 5)}
    forbidden = ["".join(t) for t in itertools.product("01", repeat=6) if "".join(t) not in allowed]
    return ForbiddenSet.finite(forbidden, "01", name="binary-order6")


FIXTURES = {
    "golden-mean": golden_mean,
    "three-letter": three_letter,
    "four-letter": four_letter,
    "binary-order6": binary_order6,
}
