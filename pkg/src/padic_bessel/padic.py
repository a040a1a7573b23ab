"""Exact arithmetic on Q_p and Q_p^n over rational coordinates.

Points are rational vectors. Valuations, norm exponents and Haar measures
are carried as integers and ``Fraction`` values, so every metric statement
(membership, nesting, shell measure, character phase) is decided exactly;
floating point enters only through transcendental constants downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _digit_product
from typing import Iterator, Union

Number = Union[int, float, Fraction]
Rational = Union[int, Fraction]

#: valuation of 0 (larger than every integer)
ORD_INF = math.inf
#: norm exponent of the zero vector ("the norm is 0")
ZERO_NORM = -math.inf


class ContextMismatchError(ValueError):
    """Operands were built over different (p, n) contexts."""


def is_prime(p: int) -> bool:
    """Deterministic trial-division primality test."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, slots=True)
class PrimeContext:
    """The ambient space Q_p^n: a prime p and a dimension n >= 1."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p = {self.p!r} is not a prime integer")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"dimension n = {self.n!r} must be a positive integer")

    def p_power(self, k: int) -> Fraction:
        """p**k as an exact rational (k may be negative)."""
        return Fraction(self.p) ** k


def _int_valuation(m: int, p: int) -> int:
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def valuation(x: Rational, p: int) -> Union[int, float]:
    """p-adic order of a rational: x = p**v * (a/b) with p coprime to a, b.

    Returns ORD_INF for x = 0.
    """
    x = Fraction(x)
    if x == 0:
        return ORD_INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def norm_exp_of(x: Rational, p: int) -> Union[int, float]:
    """Exponent m with |x|_p = p**m, or ZERO_NORM for x = 0."""
    v = valuation(x, p)
    return ZERO_NORM if v == ORD_INF else -v


def reduce_mod_ball(x: Rational, radius_exp: int, p: int) -> Fraction:
    """Canonical representative of x modulo the ball of radius p**radius_exp at 0.

    The class of x in Q_p / p**(-radius_exp) Z_p is represented by the digits
    of x strictly below the modulus, extracted with a modular inverse of the
    denominator.  The result lies in [0, p**(-radius_exp)) and differs from
    x by an element of the ball.
    """
    x = Fraction(x)
    mu = -radius_exp
    v = valuation(x, p)
    if v >= mu:
        return Fraction(0)
    g = int(v)
    k = mu - g
    a, b = x.numerator, x.denominator
    a //= p ** _int_valuation(a, p)
    b //= p ** _int_valuation(b, p)
    u = a * pow(b, -1, p**k) % p**k
    return u * Fraction(p) ** g


def fractional_part(x: Rational, p: int) -> Fraction:
    """The p-adic fractional part {x}_p: the digits at negative powers of p.

    Zero when x = 0 or the valuation is nonnegative; otherwise a rational
    in [0, 1) with denominator a power of p.
    """
    return reduce_mod_ball(x, 0, p)


@dataclass(frozen=True, slots=True)
class ExactComplex:
    """Complex scalar whose parts stay exact rationals until an irrational
    constant (a character value, an exponential) forces them to float."""

    re: Number = 0
    im: Number = 0

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other: Union["ExactComplex", Number]) -> "ExactComplex":
        if isinstance(other, ExactComplex):
            return ExactComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return ExactComplex(self.re * other, self.im * other)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Number:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.re, float) and not isinstance(self.im, float)

    def as_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


EC_ZERO = ExactComplex(0, 0)
EC_ONE = ExactComplex(1, 0)


def char_phase(y: Rational, p: int) -> Fraction:
    """Rational phase {y}_p of the standard additive character at y."""
    return fractional_part(y, p)


def character_from_phase(q: Fraction) -> ExactComplex:
    """exp(2*pi*i*q) for a rational q, exact whenever q is a quarter."""
    q = q % 1
    if q == 0:
        return EC_ONE
    if 2 * q == 1:
        return ExactComplex(-1, 0)
    if 4 * q == 1:
        return ExactComplex(0, 1)
    if 4 * q == 3:
        return ExactComplex(0, -1)
    angle = 2.0 * math.pi * float(q)
    return ExactComplex(math.cos(angle), math.sin(angle))


def character(y: Rational, p: int) -> ExactComplex:
    """chi_p(y) = exp(2*pi*i*{y}_p), exact whenever the phase is a quarter."""
    return character_from_phase(char_phase(y, p))


@dataclass(frozen=True, slots=True)
class PAdicScalar:
    """A point of Q_p represented exactly by a rational."""

    value: Fraction
    ctx: PrimeContext

    @property
    def valuation(self) -> Union[int, float]:
        return valuation(self.value, self.ctx.p)

    @property
    def norm_exp(self) -> Union[int, float]:
        return norm_exp_of(self.value, self.ctx.p)

    @property
    def norm(self) -> Fraction:
        m = self.norm_exp
        return Fraction(0) if m == ZERO_NORM else self.ctx.p_power(int(m))

    def fractional_part(self) -> Fraction:
        return fractional_part(self.value, self.ctx.p)

    def character(self) -> ExactComplex:
        return character(self.value, self.ctx.p)


@dataclass(frozen=True, slots=True)
class PAdicVector:
    """A point of Q_p^n with exact rational coordinates."""

    coords: tuple
    ctx: PrimeContext

    @classmethod
    def of(cls, ctx: PrimeContext, *coords: Rational) -> "PAdicVector":
        if len(coords) != ctx.n:
            raise ValueError(f"expected {ctx.n} coordinates, got {len(coords)}")
        return cls(tuple(Fraction(c) for c in coords), ctx)

    @classmethod
    def zero(cls, ctx: PrimeContext) -> "PAdicVector":
        return cls((Fraction(0),) * ctx.n, ctx)

    def _check(self, other: "PAdicVector") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} != {other.ctx}")

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def norm_exp(self) -> Union[int, float]:
        """m with ||x||_p = p**m (max over coordinates), or ZERO_NORM."""
        return max(norm_exp_of(c, self.ctx.p) for c in self.coords)

    @property
    def norm(self) -> Fraction:
        m = self.norm_exp
        return Fraction(0) if m == ZERO_NORM else self.ctx.p_power(int(m))

    @property
    def min_valuation(self) -> Union[int, float]:
        return min(valuation(c, self.ctx.p) for c in self.coords)

    def __add__(self, other: "PAdicVector") -> "PAdicVector":
        self._check(other)
        return PAdicVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ctx)

    def __sub__(self, other: "PAdicVector") -> "PAdicVector":
        self._check(other)
        return PAdicVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ctx)

    def __neg__(self) -> "PAdicVector":
        return PAdicVector(tuple(-a for a in self.coords), self.ctx)

    def dot(self, other: "PAdicVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def scalars(self) -> tuple:
        return tuple(PAdicScalar(c, self.ctx) for c in self.coords)


@dataclass(frozen=True, slots=True)
class Ball:
    """The ball {x : ||x - center||_p <= p**radius_exp}.

    Two balls over one context are disjoint, equal, or nested; membership
    and all relations are exact.  ``known_canonical`` records that the
    center is already the reduced representative (digit constructions
    preserve this), sparing the reduction on hot paths; it never affects
    equality.
    """

    center: PAdicVector
    radius_exp: int
    known_canonical: bool = field(default=False, compare=False, repr=False)

    @property
    def ctx(self) -> PrimeContext:
        return self.center.ctx

    @property
    def measure(self) -> Fraction:
        return self.ctx.p_power(self.radius_exp * self.ctx.n)

    def canonical(self) -> "Ball":
        """Same ball with the center reduced to its canonical representative."""
        if self.known_canonical:
            return self
        p = self.ctx.p
        coords = tuple(reduce_mod_ball(c, self.radius_exp, p) for c in self.center.coords)
        center = self.center if coords == self.center.coords else PAdicVector(coords, self.ctx)
        return Ball(center, self.radius_exp, known_canonical=True)

    def key(self):
        c = self.canonical()
        return (c.radius_exp, c.center.coords)

    @property
    def contains_zero(self) -> bool:
        return self.center.norm_exp <= self.radius_exp

    def contains(self, x: PAdicVector) -> bool:
        return (x - self.center).norm_exp <= self.radius_exp

    def relation(self, other: "Ball") -> str:
        """One of 'disjoint', 'equal', 'contains', 'inside'."""
        d = (self.center - other.center).norm_exp
        if d > max(self.radius_exp, other.radius_exp):
            return "disjoint"
        if self.radius_exp == other.radius_exp:
            return "equal"
        return "contains" if self.radius_exp > other.radius_exp else "inside"

    def children(self) -> Iterator["Ball"]:
        """The p**n sub-balls of radius exponent r - 1, in digit order.

        A canonical parent yields canonical children: the new digit sits at
        exactly the power the finer modulus exposes.
        """
        p, n = self.ctx.p, self.ctx.n
        offset_scale = Fraction(p) ** (-self.radius_exp)
        for digits in _digit_product(range(p), repeat=n):
            coords = tuple(
                c + d * offset_scale for c, d in zip(self.center.coords, digits)
            )
            yield Ball(
                PAdicVector(coords, self.ctx),
                self.radius_exp - 1,
                known_canonical=self.known_canonical,
            )


def ball_measure(radius_exp: int, ctx: PrimeContext) -> Fraction:
    """Haar measure of a ball of radius p**radius_exp (unit ball has mass 1)."""
    return ctx.p_power(radius_exp * ctx.n)


def shell_measure(k: int, ctx: PrimeContext) -> Fraction:
    """Measure of the shell {||x||_p = p**k}: p**(kn) - p**((k-1)n)."""
    return ctx.p_power(k * ctx.n) - ctx.p_power((k - 1) * ctx.n)


def shell_character_integral(
    k: int, xi_norm_exp: Union[int, float], ctx: PrimeContext
) -> Fraction:
    """Integral of chi_p(xi . w) over the shell {||w||_p = p**k}.

    Depends on xi only through its norm exponent m: the full shell measure
    for m <= -k, the single cancelling value -p**((k-1)n) at m = -k + 1,
    and 0 beyond.  The zero vector (m = ZERO_NORM) falls in the first case.
    """
    if xi_norm_exp <= -k:
        return shell_measure(k, ctx)
    if xi_norm_exp == -k + 1:
        return -ctx.p_power((k - 1) * ctx.n)
    return Fraction(0)
