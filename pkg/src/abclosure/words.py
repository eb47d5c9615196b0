"""Finite and infinite words, Parikh vectors and window statistics.

The factor language of an infinite word is only ever seen through a finite
prefix (the *window*).  Every statistic here is relative to that window;
:func:`stabilized_index` doubles the window until the Parikh sets stop
changing, which is reliable for uniformly recurrent words but not a proof.
"""
from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels

ParikhVector = tuple

MAX_ALPHABET = 256


class WindowError(ValueError):
    """A requested length does not fit in the window."""


@dataclass(frozen=True)
class Alphabet:
    names: tuple

    def __post_init__(self):
        names = tuple(str(a) for a in self.names)
        if not names:
            raise ValueError("alphabet must have at least one letter")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate letter names in {names}")
        if len(names) > MAX_ALPHABET:
            raise ValueError("at most 256 letters are supported")
        object.__setattr__(self, "names", names)

    @classmethod
    def of(cls, letters: Iterable[str]) -> "Alphabet":
        """Alphabet of the distinct letters, in sorted order."""
        return cls(tuple(sorted(set(letters))))

    @classmethod
    def range(cls, k: int) -> "Alphabet":
        return cls(tuple(str(i) for i in range(k)))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"letter {name!r} not in alphabet {self.names}") from None

    def encode(self, text: str) -> np.ndarray:
        return np.fromiter((self.index(c) for c in text), dtype=np.uint8, count=len(text))

    def render(self, symbols) -> str:
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[int(s)] for s in symbols)

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet.of(self.names + other.names)

    def translate(self, symbols: np.ndarray, target: "Alphabet") -> np.ndarray:
        """Re-index symbols of this alphabet into ``target``."""
        table = np.array([target.index(n) for n in self.names], dtype=np.uint8)
        return table[symbols]


class FiniteWord:
    """An immutable finite word over an :class:`Alphabet`."""

    __slots__ = ("symbols", "alphabet")

    def __init__(self, symbols, alphabet: Alphabet):
        arr = np.asarray(symbols, dtype=np.uint8).copy()
        if arr.ndim != 1:
            raise ValueError("a word is one-dimensional")
        if arr.size and int(arr.max()) >= len(alphabet):
            raise ValueError("symbol outside the declared alphabet")
        arr.setflags(write=False)
        self.symbols = arr
        self.alphabet = alphabet

    @classmethod
    def from_str(cls, text: str, alphabet: Optional[Alphabet] = None) -> "FiniteWord":
        alphabet = alphabet or Alphabet.of(text or "0")
        return cls(alphabet.encode(text), alphabet)

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return FiniteWord(self.symbols[item], self.alphabet)
        return self.alphabet.names[int(self.symbols[item])]

    def __add__(self, other: "FiniteWord") -> "FiniteWord":
        if other.alphabet != self.alphabet:
            alpha = self.alphabet.union(other.alphabet)
            return FiniteWord(np.concatenate([self.alphabet.translate(self.symbols, alpha),
                                              other.alphabet.translate(other.symbols, alpha)]),
                              alpha)
        return FiniteWord(np.concatenate([self.symbols, other.symbols]), self.alphabet)

    def reversed(self) -> "FiniteWord":
        return FiniteWord(self.symbols[::-1], self.alphabet)

    def is_palindrome(self) -> bool:
        return bool(np.array_equal(self.symbols, self.symbols[::-1]))

    def __eq__(self, other):
        if isinstance(other, str):
            return str(self) == other
        if not isinstance(other, FiniteWord):
            return NotImplemented
        return str(self) == str(other)

    def __hash__(self):
        return hash(str(self))

    def __str__(self):
        return self.alphabet.render(self.symbols)

    def __repr__(self):
        return f"FiniteWord({str(self)!r})"


class InfiniteWord:
    """A one-sided infinite word, seen through its prefixes.

    Subclasses implement ``_generate(n)`` returning at least ``n`` letters;
    results are memoized, and ``prefix(m)`` is always a prefix of
    ``prefix(n)`` for m <= n.
    """

    def __init__(self, alphabet: Alphabet, name: str = "", params: Optional[dict] = None):
        self.alphabet = alphabet
        self.name = name or type(self).__name__
        self.params = dict(params or {})
        self._buf = np.zeros(0, dtype=np.uint8)
        self._lock = threading.Lock()

    def _generate(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def prefix(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("negative prefix length")
        with self._lock:
            if len(self._buf) < n:
                buf = np.asarray(self._generate(max(n, 2 * len(self._buf))), dtype=np.uint8)
                if len(buf) < n:
                    raise RuntimeError(f"{self.name}: generator produced {len(buf)} < {n} letters")
                buf.setflags(write=False)
                self._buf = buf
            return self._buf[:n]

    def finite(self, n: int) -> FiniteWord:
        return FiniteWord(self.prefix(n), self.alphabet)

    def render(self, n: int) -> str:
        return self.alphabet.render(self.prefix(n))

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


WordLike = "InfiniteWord | FiniteWord"


def window_of(x, N: Optional[int]) -> np.ndarray:
    """The letters a statistic is computed on: prefix(N), or the whole finite word."""
    if isinstance(x, FiniteWord):
        return x.symbols if N is None else x.symbols[:N]
    if N is None:
        raise ValueError("a window length N is required for infinite words")
    return x.prefix(N)


def _check_len(n: int, total: int):
    if n < 0:
        raise WindowError("length must be non-negative")
    if n > total:
        raise WindowError(f"factor length {n} exceeds window {total}")


# ---------------------------------------------------------------------------
# finite-word primitives

def parikh(w, alphabet: Optional[Alphabet] = None) -> ParikhVector:
    """Letter counts of a finite word, in alphabet order."""
    if isinstance(w, str):
        w = FiniteWord.from_str(w, alphabet)
    elif alphabet is not None and w.alphabet != alphabet:
        w = FiniteWord(w.alphabet.translate(w.symbols, alphabet), alphabet)
    counts = np.bincount(w.symbols, minlength=len(w.alphabet))
    return tuple(int(c) for c in counts)


def abelian_equiv(u, v, alphabet: Optional[Alphabet] = None) -> bool:
    if isinstance(u, str) and isinstance(v, str) and alphabet is None:
        alphabet = Alphabet.of((u + v) or "0")
    return parikh(u, alphabet) == parikh(v, alphabet)


# ---------------------------------------------------------------------------
# window statistics

def factor_parikhs(x, n: int, N: Optional[int] = None) -> set:
    w = window_of(x, N)
    _check_len(n, len(w))
    k = len(x.alphabet)
    counts = kernels.prefix_counts(w, k)
    win = counts[n:] - counts[: len(counts) - n]
    return {tuple(int(c) for c in row) for row in np.unique(win, axis=0)}


def abelian_complexity(x, n: int, N: Optional[int] = None) -> int:
    return len(factor_parikhs(x, n, N))


def factor_set(x, n: int, N: Optional[int] = None) -> set:
    """Distinct length-n factors of the window, as byte strings."""
    w = window_of(x, N)
    _check_len(n, len(w))
    b = w.tobytes()
    return {b[i:i + n] for i in range(len(b) - n + 1)}


def factor_complexities(x, L: int, N: Optional[int] = None) -> np.ndarray:
    """Number of distinct factors of each length 0..L in the window."""
    w = np.ascontiguousarray(window_of(x, N))
    _check_len(L, len(w))
    sa = kernels.suffix_array(w)
    lcp = kernels.lcp_array(w, sa)
    return kernels.distinct_factor_counts(sa, lcp, len(w), L)


def factor_complexity(x, n: int, N: Optional[int] = None) -> int:
    return int(factor_complexities(x, n, N)[n])


def corridor_profile(x, L: int, N: Optional[int] = None):
    """(mins, maxs) arrays of shape (L+1, k): per-letter count range per length."""
    w = window_of(x, N)
    _check_len(L, len(w))
    counts = kernels.prefix_counts(w, len(x.alphabet))
    return kernels.corridor_profile(counts, L)


def corridor(x, a, n: int, N: Optional[int] = None) -> tuple:
    """(min, max) of |v|_a over the length-n factors v of the window."""
    ai = x.alphabet.index(str(a))
    mins, maxs = corridor_profile(x, n, N)
    return int(mins[n, ai]), int(maxs[n, ai])


@dataclass(frozen=True)
class BalanceWitness:
    n: int
    letter: str
    light: str
    heavy: str


def is_balanced(x, L: int, N: Optional[int] = None):
    """(True, None) or (False, witness) over factor lengths 1..L."""
    w = window_of(x, N)
    mins, maxs = corridor_profile(x, L, N)
    width = maxs - mins
    bad = np.argwhere(width[1:] > 1)
    if len(bad) == 0:
        return True, None
    n, a = int(bad[0][0]) + 1, int(bad[0][1])
    counts = kernels.prefix_counts(w, len(x.alphabet))
    win = counts[n:, a] - counts[: len(counts) - n, a]
    i_lo, i_hi = int(np.argmin(win)), int(np.argmax(win))
    render = x.alphabet.render
    return False, BalanceWitness(n, x.alphabet.names[a], render(w[i_lo:i_lo + n]),
                                 render(w[i_hi:i_hi + n]))


def freq_bounds(x, a, n: int, N: Optional[int] = None) -> tuple:
    lo, hi = corridor(x, a, n, N)
    return Fraction(lo, n), Fraction(hi, n)


def is_periodic_window(x, N: Optional[int] = None) -> Optional[int]:
    """Least p <= N/2 such that the window is p-periodic, else None.

    The candidate period comes from the KMP border array; it is confirmed by
    the abelian criterion (all length-p factors abelian equivalent).
    """
    w = np.ascontiguousarray(window_of(x, N))
    if len(w) < 2:
        return None
    p = len(w) - int(kernels.prefix_function(w)[-1])
    if 2 * p > len(w):
        return None
    if abelian_complexity(FiniteWord(w, x.alphabet), p) != 1:
        raise AssertionError("periodic window failed the abelian criterion")
    return p


# ---------------------------------------------------------------------------
# abelian index

@dataclass
class AbelianIndex:
    """Parikh vectors and corridors of the factors of a window, lengths 1..L."""

    name: str
    alphabet: Alphabet
    window: int
    L: int
    base: int
    keys: list = field(repr=False)  # keys[n] = sorted unique int64 Parikh keys
    mins: np.ndarray = field(repr=False)
    maxs: np.ndarray = field(repr=False)
    stabilized: bool = False

    @classmethod
    def build(cls, x, L: int, N: Optional[int] = None, name: str = "") -> "AbelianIndex":
        w = np.ascontiguousarray(window_of(x, N))
        _check_len(L, len(w))
        k = len(x.alphabet)
        base = L + 1
        if k * np.log2(base) > 62:
            raise ValueError("alphabet too large for integer Parikh keys at this L")
        counts = kernels.prefix_counts(w, k)
        keys = [np.zeros(1, dtype=np.int64)]
        for n in range(1, L + 1):
            keys.append(np.unique(kernels.parikh_keys(counts, n, base)))
        mins, maxs = kernels.corridor_profile(counts, L)
        return cls(name or getattr(x, "name", "word"), x.alphabet, len(w), L, base,
                   keys, mins, maxs)

    def decode(self, key: int) -> ParikhVector:
        out = []
        for _ in range(len(self.alphabet)):
            key, r = divmod(int(key), self.base)
            out.append(r)
        return tuple(out)

    def parikh_set(self, n: int) -> set:
        return {self.decode(k) for k in self.keys[n]}

    def same_sets(self, other: "AbelianIndex") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.keys, other.keys))

    def profile_rows(self):
        for n in range(1, self.L + 1):
            for a, name in enumerate(self.alphabet.names):
                yield n, name, int(self.mins[n, a]), int(self.maxs[n, a])

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "letter", "min", "max"])
        wr.writerows(self.profile_rows())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "schema": 1,
            "word": self.name,
            "window": self.window,
            "L": self.L,
            "stabilized": self.stabilized,
            "corridor": [{"n": n, "letter": a, "min": lo, "max": hi}
                         for n, a, lo, hi in self.profile_rows()],
            "abelian_complexity": [len(self.keys[n]) for n in range(1, self.L + 1)],
        }, sort_keys=True)


def stabilized_index(x, L: int, N0: int = 1024, max_window: int = 1 << 20) -> AbelianIndex:
    """Double the window until the Parikh sets for n <= L survive two doublings."""
    if isinstance(x, FiniteWord):
        return AbelianIndex.build(x, L)
    N = max(N0, 2 * L)
    history = [AbelianIndex.build(x, L, N)]
    while N < max_window:
        N *= 2
        history.append(AbelianIndex.build(x, L, N))
        if len(history) >= 3 and history[-3].same_sets(history[-2]) and history[-2].same_sets(history[-1]):
            idx = history[-1]
            idx.stabilized = True
            return idx
    return history[-1]
