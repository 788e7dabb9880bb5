"""Exact arithmetic on the rank-two character and cocharacter lattices.

Weights live in M = Z^2 and cocharacters in N = Z^2; both are embedded in
Q^2 and represented by the same immutable :class:`Vec2` type with
:class:`fractions.Fraction` coordinates.  Nothing in this package uses
floating point arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Union

Number = Union[int, Fraction]


def as_fraction(x: Number | str) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: every quantity handled here must be exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class Vec2:
    """A point of Q^2, used for weights, rational weights and cocharacters."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.a, -self.b)

    def __mul__(self, c: Number) -> "Vec2":
        c = as_fraction(c)
        return Vec2(c * self.a, c * self.b)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.a
        yield self.b

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_str(self) -> str:
        return f"({_fmt(self.a)},{_fmt(self.b)})"

    def __repr__(self) -> str:
        return self.to_str()


# Readable aliases.  A ``Weight`` is expected to be integral.
Weight = Vec2
RationalWeight = Vec2
Cocharacter = Vec2

ZERO = Vec2(0, 0)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_rational(x: Number) -> str:
    """Canonical text form of a rational: ``"p"`` or ``"p/q"``."""
    return _fmt(as_fraction(x))


def vec(a: Number | str, b: Number | str) -> Vec2:
    return Vec2(as_fraction(a), as_fraction(b))


def weight(a: Number, b: Number) -> Vec2:
    """Construct an integral weight, refusing non-integer coordinates."""
    v = vec(a, b)
    if not v.is_integral:
        raise ValueError(f"weight {v} is not integral")
    return v


def as_vec(x) -> Vec2:
    """Coerce a pair-like object to :class:`Vec2`."""
    if isinstance(x, Vec2):
        return x
    a, b = x
    return vec(a, b)


def pair(lam: Vec2, chi: Vec2) -> Fraction:
    """The canonical pairing between a cocharacter and a weight."""
    return lam.a * chi.a + lam.b * chi.b


def det2(u: Vec2, v: Vec2) -> Fraction:
    return u.a * v.b - u.b * v.a


def weyl_reflect(chi: Vec2) -> Vec2:
    """The nontrivial Weyl element of GL2: swap the coordinates."""
    return Vec2(chi.b, chi.a)


def proportional(u: Vec2, v: Vec2) -> bool:
    """True iff u and v are linearly dependent over Q.

    The zero vector counts as proportional to everything.
    """
    return det2(u, v) == 0


def vsum(vs: Iterable[Vec2]) -> Vec2:
    total = ZERO
    for v in vs:
        total = total + v
    return total


def primitive(v: Vec2) -> Vec2:
    """The primitive integral vector on the ray through a nonzero rational v."""
    if v.is_zero:
        raise ValueError("the zero vector has no primitive representative")
    den = lcm(v.a.denominator, v.b.denominator)
    x, y = int(v.a * den), int(v.b * den)
    g = gcd(x, y)
    return Vec2(x // g, y // g)


def perp(v: Vec2) -> Vec2:
    """Rotate by a quarter turn: the result pairs to zero with v."""
    return Vec2(-v.b, v.a)


def lattice_value_generator(lam: Vec2) -> Fraction:
    """The positive generator of the subgroup <lam, M> of Q.

    For a rational cocharacter lam the image of Z^2 under pairing with lam is
    a cyclic group; this returns its positive generator (0 for lam = 0).
    """
    if lam.is_zero:
        return Fraction(0)
    den = lcm(lam.a.denominator, lam.b.denominator)
    return Fraction(gcd(int(lam.a * den), int(lam.b * den)), den)


def solve_pairing(lam: Vec2, value: Fraction) -> Vec2 | None:
    """An integral chi with <lam, chi> = value, or None if none exists.

    Uses the extended Euclidean algorithm; deterministic.
    """
    g = lattice_value_generator(lam)
    if g == 0:
        return ZERO if value == 0 else None
    q = value / g
    if q.denominator != 1:
        return None
    den = lcm(lam.a.denominator, lam.b.denominator)
    x, y = int(lam.a * den), int(lam.b * den)
    s, t = _ext_gcd(x, y)
    k = int(q)
    return Vec2(s * k, t * k)


def _ext_gcd(x: int, y: int) -> tuple[int, int]:
    """Coefficients (s, t) with s*x + t*y = gcd(x, y) >= 0."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def solve2(l1: Vec2, c1: Fraction, l2: Vec2, c2: Fraction) -> Vec2:
    """The unique x with <l1,x> = c1 and <l2,x> = c2 (l1, l2 independent)."""
    d = det2(l1, l2)
    if d == 0:
        raise ValueError("linear forms are dependent")
    return Vec2((c1 * l2.b - c2 * l1.b) / d, (l1.a * c2 - l2.a * c1) / d)


def sign(x: Fraction | int) -> int:
    return (x > 0) - (x < 0)
