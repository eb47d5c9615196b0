"""Exact arithmetic in Q(sqrt D) and on the circle T = [0, 1).

Every decision (comparison, floor, interval membership) is made with
integer arithmetic only.  Rationals embed into every field, so a value with
``q1 == 0`` combines freely with any ``D``; two genuinely irrational values
over different fields cannot be mixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "IncompatibleFieldError",
    "QuadExt",
    "TorusPoint",
    "CircleInterval",
    "qe_compare",
    "reduce_mod1",
    "rotate",
    "circle_distance",
    "interval_contains",
    "is_squarefree",
    "sign_of",
    "floor_of",
]


class IncompatibleFieldError(ValueError):
    pass


def is_squarefree(d: int) -> bool:
    if d < 0:
        return False
    if d in (0, 1):
        return True
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def sign_of(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for integers a, b and square-free d."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    # opposite signs: the larger magnitude wins; equality is impossible for d non-square
    if a * a > b * b * d:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


def floor_of(a: int, b: int, d: int, q: int) -> int:
    """floor((a + b*sqrt(d)) / q) for q > 0, by integer square-root bracketing."""
    if b == 0 or d == 0:
        return a // q
    r = math.isqrt(b * b * d)  # b*b*d is never a perfect square here
    t = r if b > 0 else -r - 1
    # a + b*sqrt(d) lies strictly between a + t and a + t + 1
    return (a + t) // q


Number = Union["QuadExt", int, Fraction]


@dataclass(frozen=True, eq=False)
class QuadExt:
    """The real number ``q0 + q1*sqrt(D)`` with rational q0, q1."""

    q0: Fraction
    q1: Fraction = Fraction(0)
    D: int = 0

    def __post_init__(self):
        q0, q1, d = Fraction(self.q0), Fraction(self.q1), int(self.D)
        if not is_squarefree(d):
            raise ValueError(f"D must be a non-negative square-free integer, got {d}")
        if d == 1:
            q0, q1, d = q0 + q1, Fraction(0), 0
        if q1 == 0 or d == 0:
            q1, d = Fraction(0), 0
        object.__setattr__(self, "q0", q0)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "D", d)

    @classmethod
    def coerce(cls, x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, TorusPoint):
            return x.value
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x))
        raise TypeError(f"cannot convert {type(x).__name__} to QuadExt")

    @property
    def is_rational(self) -> bool:
        return self.q1 == 0

    def _field(self, other: "QuadExt") -> int:
        if self.D == other.D or other.D == 0:
            return self.D
        if self.D == 0:
            return other.D
        raise IncompatibleFieldError(
            f"incompatible field: sqrt({self.D}) and sqrt({other.D})")

    def __add__(self, other):
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadExt(self.q0 + o.q0, self.q1 + o.q1, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.q0, -self.q1, self.D)

    def __sub__(self, other):
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return QuadExt(self.q0 * o.q0 + self.q1 * o.q1 * d,
                       self.q0 * o.q1 + self.q1 * o.q0, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.q0, -self.q1, self.D)

    def __truediv__(self, other):
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        if o.sign() == 0:
            raise ZeroDivisionError("division by zero")
        norm = o.q0 * o.q0 - o.q1 * o.q1 * o.D
        num = self * o.conjugate()
        return QuadExt(num.q0 / norm, num.q1 / norm, num.D)

    def __rtruediv__(self, other):
        return QuadExt.coerce(other) / self

    def _scaled(self):
        """Integers (a, b, q) with self == (a + b*sqrt(D)) / q, q > 0."""
        q = self.q0.denominator * self.q1.denominator // math.gcd(
            self.q0.denominator, self.q1.denominator)
        return (self.q0.numerator * (q // self.q0.denominator),
                self.q1.numerator * (q // self.q1.denominator), q)

    def sign(self) -> int:
        a, b, _ = self._scaled()
        return sign_of(a, b, self.D)

    def floor(self) -> int:
        a, b, q = self._scaled()
        return floor_of(a, b, self.D, q)

    __floor__ = floor

    def __eq__(self, other):
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self.q0 == o.q0 and self.q1 == o.q1 and (self.q1 == 0 or self.D == o.D)

    def __hash__(self):
        if self.q1 == 0:
            return hash(self.q0)
        return hash((self.q0, self.q1, self.D))

    def __lt__(self, other):
        return qe_compare(self, other) < 0

    def __le__(self, other):
        return qe_compare(self, other) <= 0

    def __gt__(self, other):
        return qe_compare(self, other) > 0

    def __ge__(self, other):
        return qe_compare(self, other) >= 0

    def __float__(self):
        # display only; never used in a decision
        return float(self.q0) + float(self.q1) * math.sqrt(self.D)

    def __repr__(self):
        return f"QuadExt({self})"

    def __str__(self):
        if self.q1 == 0:
            return str(self.q0)
        return f"quad({self.q0},{self.q1},{self.D})"


def qe_compare(a: Number, b: Number) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    return (QuadExt.coerce(a) - QuadExt.coerce(b)).sign()


@dataclass(frozen=True)
class TorusPoint:
    value: QuadExt

    def __post_init__(self):
        v = QuadExt.coerce(self.value)
        if v.sign() < 0 or qe_compare(v, 1) >= 0:
            raise ValueError(f"torus point must lie in [0, 1), got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x) -> "TorusPoint":
        return reduce_mod1(x)

    def __str__(self):
        return str(self.value)


def reduce_mod1(a: Number) -> TorusPoint:
    """Fractional part {a} = a - floor(a)."""
    a = QuadExt.coerce(a)
    return TorusPoint(a - a.floor())


def rotate(p, alpha: Number) -> TorusPoint:
    return reduce_mod1(QuadExt.coerce(p) + QuadExt.coerce(alpha))


def circle_distance(x) -> QuadExt:
    """||x|| = min(x, 1 - x) for a point of the torus."""
    x = reduce_mod1(x).value
    y = 1 - x
    return x if x <= y else y


@dataclass(frozen=True)
class CircleInterval:
    """Counter-clockwise arc from ``start`` to ``end``.

    ``start`` is stored in [0, 1) and ``end`` in (0, 1], so ``I(x, 1)`` keeps
    the point 1 (identified with 0) as its end.  An arc whose ends coincide is
    the full circle.
    """

    start: QuadExt
    end: QuadExt
    include_start: bool = True
    include_end: bool = False

    def __post_init__(self):
        s = reduce_mod1(self.start).value
        e = reduce_mod1(self.end).value
        if e.sign() == 0:
            e = QuadExt(1)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    @classmethod
    def under(cls, x, y) -> "CircleInterval":
        """Half-open arc containing its start point x."""
        return cls(QuadExt.coerce(x), QuadExt.coerce(y), True, False)

    @classmethod
    def bar(cls, x, y) -> "CircleInterval":
        """Half-open arc containing its end point y."""
        return cls(QuadExt.coerce(x), QuadExt.coerce(y), False, True)

    @property
    def length(self) -> QuadExt:
        d = self.end - self.start
        return d if d.sign() > 0 else d + 1

    @property
    def is_full(self) -> bool:
        return self.length == 1

    def __contains__(self, p) -> bool:
        return interval_contains(self, p)

    def __str__(self):
        lb = "[" if self.include_start else "("
        rb = "]" if self.include_end else ")"
        return f"{lb}{self.start}, {self.end}{rb}"


def interval_contains(interval: CircleInterval, p) -> bool:
    offset = reduce_mod1(QuadExt.coerce(p) - interval.start).value
    if offset.sign() == 0:
        # p is the start point; on a full circle it is also the end point
        return interval.include_start or (interval.is_full and interval.include_end)
    c = qe_compare(offset, interval.length)
    if c < 0:
        return True
    if c == 0:
        return interval.include_end
    return False
