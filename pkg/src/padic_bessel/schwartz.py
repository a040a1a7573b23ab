"""Test functions on Q_p^n: finite complex combinations of ball indicators.

A locally constant, compactly supported function is stored as a list of
(coefficient, ball) terms.  ``canonicalize`` rewrites any term list into the
unique coarsest partition of a covering ball into sub-balls on which the
function is constant, by inserting every term into an ultrametric
subdivision tree and merging constant siblings bottom-up.  All structural
operations (integrals, inner products, suprema) are exact on rational
coefficients.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as digit_product
from typing import Optional, Sequence, Union

from padic_bessel.padic import (
    EC_ZERO,
    ZERO_NORM,
    Ball,
    ContextMismatchError,
    ExactComplex,
    Number,
    PAdicVector,
    PrimeContext,
    is_prime,
    reduce_mod_ball,
)

Term = tuple  # (ExactComplex, Ball)


class FunctionFormatError(ValueError):
    """Serialized test-function text violates the schema."""


@dataclass(frozen=True)
class Supremum:
    """Result of a supremum query over all of Q_p^n.

    ``cell`` is a ball on which the maximum is attained, or None when the
    supremum is 0 and is attained off the support (every compactly supported
    function vanishes near infinity, so 0 always competes).
    """

    value: Number
    cell: Optional[Ball]


@dataclass(frozen=True)
class BruhatSchwartzFunction:
    ctx: PrimeContext
    terms: tuple
    canonical: bool = field(default=False, compare=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: PrimeContext) -> "BruhatSchwartzFunction":
        return cls(ctx, (), canonical=True)

    @classmethod
    def indicator(cls, ball: Ball, coeff: Union[Number, ExactComplex] = 1) -> "BruhatSchwartzFunction":
        c = coeff if isinstance(coeff, ExactComplex) else ExactComplex(coeff, 0)
        return cls(ball.ctx, ((c, ball.canonical()),)).canonicalize()

    @classmethod
    def unit_ball(cls, ctx: PrimeContext) -> "BruhatSchwartzFunction":
        """The indicator of Z_p^n (the reproducing test function)."""
        return cls.indicator(Ball(PAdicVector.zero(ctx), 0))

    # -- pointwise structure ----------------------------------------------

    def evaluate(self, x: PAdicVector) -> ExactComplex:
        """Value at x: the sum of coefficients of the balls containing x."""
        if x.ctx != self.ctx:
            raise ContextMismatchError(f"{x.ctx} != {self.ctx}")
        total = EC_ZERO
        for c, ball in self.terms:
            if ball.contains(x):
                total = total + c
        return total

    @property
    def is_zero(self) -> bool:
        return not self.canonicalize().terms

    @property
    def is_real(self) -> bool:
        return all(c.im == 0 for c, _ in self.terms)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c, _ in self.terms)

    def min_radius_exp(self) -> Optional[int]:
        """Constancy index: the function is constant on every ball of this
        radius exponent (None for the zero function, constant everywhere)."""
        f = self.canonicalize()
        if not f.terms:
            return None
        return min(ball.radius_exp for _, ball in f.terms)

    def support_norm_exp(self) -> Union[int, float]:
        """Exponent L with supp(f) inside the ball of radius p**L at 0."""
        f = self.canonicalize()
        if not f.terms:
            return ZERO_NORM
        return max(
            max(ball.radius_exp, ball.center.norm_exp) for _, ball in f.terms
        )

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "BruhatSchwartzFunction") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} != {other.ctx}")

    def __add__(self, other: "BruhatSchwartzFunction") -> "BruhatSchwartzFunction":
        self._check(other)
        return BruhatSchwartzFunction(self.ctx, self.terms + other.terms).canonicalize()

    def __sub__(self, other: "BruhatSchwartzFunction") -> "BruhatSchwartzFunction":
        return self + (-other)

    def __neg__(self) -> "BruhatSchwartzFunction":
        return BruhatSchwartzFunction(
            self.ctx, tuple((-c, b) for c, b in self.terms), canonical=self.canonical
        )

    def scale(self, factor: Union[Number, ExactComplex]) -> "BruhatSchwartzFunction":
        return BruhatSchwartzFunction(
            self.ctx, tuple((c * factor, b) for c, b in self.terms)
        ).canonicalize()

    def reflect(self) -> "BruhatSchwartzFunction":
        """The function x -> f(-x)."""
        return BruhatSchwartzFunction(
            self.ctx, tuple((c, Ball(-b.center, b.radius_exp)) for c, b in self.terms)
        ).canonicalize()

    # -- canonical form ----------------------------------------------------

    def canonicalize(self) -> "BruhatSchwartzFunction":
        """Equivalent function on pairwise-disjoint maximal constant balls.

        Terms are inserted into a subdivision tree rooted at a ball around 0
        covering every term; leaves carry the accumulated value of their
        digit path, and sibling groups that agree are merged back into their
        parent, so the result is the coarsest disjoint form and the map is
        idempotent.
        """
        if self.canonical:
            return self
        terms = [(c, b.canonical()) for c, b in self.terms if not c.is_zero()]
        if not terms:
            return BruhatSchwartzFunction(self.ctx, (), canonical=True)
        root_r = 0
        for _, ball in terms:
            root_r = max(root_r, ball.radius_exp)
            m = ball.center.norm_exp
            if m != ZERO_NORM:
                root_r = max(root_r, int(m))

        # tree node: [coefficient, {digit tuple: child node}]
        root = [EC_ZERO, {}]
        p = self.ctx.p
        root_scale = p**root_r
        for c, ball in terms:
            depth = root_r - ball.radius_exp
            per_coord = []
            for x in ball.center.coords:
                # canonical centers have p-power denominators dividing the
                # root scale, so the digit path is one integer expansion
                u = x.numerator * root_scale // x.denominator
                digits = []
                for _ in range(depth):
                    digits.append(u % p)
                    u //= p
                per_coord.append(digits)
            node = root
            for j in range(depth):
                step = tuple(digits[j] for digits in per_coord)
                node = node[1].setdefault(step, [EC_ZERO, {}])
            node[0] = node[0] + c

        n = self.ctx.n
        ctx = self.ctx
        out: list = []

        def walk(node, center_coords, radius, running):
            """Return ('const', v) when the subtree is constant, else
            ('cells', ...) after appending this subtree's cells to out."""
            running = running + node[0]
            children = node[1]
            if not children:
                return ("const", running)
            scale = Fraction(p) ** (-radius)
            results = []
            for digits in digit_product(range(p), repeat=n):
                child_coords = tuple(
                    x + d * scale for x, d in zip(center_coords, digits)
                )
                child = children.get(digits)
                if child is None:
                    results.append(("const", running, child_coords))
                else:
                    sub = walk(child, child_coords, radius - 1, running)
                    results.append((sub[0], sub[1] if sub[0] == "const" else None, child_coords))
            if all(r[0] == "const" for r in results):
                first = results[0][1]
                if all(r[1] == first for r in results[1:]):
                    return ("const", first)
            for kind, value, coords in results:
                if kind == "const" and not value.is_zero():
                    out.append(
                        (value, Ball(PAdicVector(coords, ctx), radius - 1, known_canonical=True))
                    )
            return ("cells", None)

        zero_coords = (Fraction(0),) * n
        top = walk(root, zero_coords, root_r, EC_ZERO)
        if top[0] == "const":
            cells = (
                []
                if top[1].is_zero()
                else [(top[1], Ball(PAdicVector(zero_coords, ctx), root_r, known_canonical=True))]
            )
        else:
            cells = out
        return BruhatSchwartzFunction(self.ctx, tuple(cells), canonical=True)

    # -- integration -------------------------------------------------------

    def integral(self) -> ExactComplex:
        """Haar integral: sum of coefficient * ball measure over the terms."""
        total = EC_ZERO
        for c, ball in self.terms:
            total = total + c * ball.measure
        return total

    def ball_integral(self, region: Ball) -> ExactComplex:
        """Integral of f over an arbitrary ball (exact nested-or-disjoint cut)."""
        total = EC_ZERO
        for c, ball in self.terms:
            rel = ball.relation(region)
            if rel == "disjoint":
                continue
            smaller = ball if rel in ("inside", "equal") else region
            total = total + c * smaller.measure
        return total

    def inner_product(self, other: "BruhatSchwartzFunction") -> ExactComplex:
        """L2 pairing <f, g> = integral of f * conj(g).

        Both sides are brought to canonical form, so cells within one side
        are pairwise disjoint and each cell meets at most one equal-or-larger
        cell of the other side; the pairing reduces to containing-cell
        lookups keyed by (radius, reduced center) instead of an all-pairs
        scan.
        """
        self._check(other)
        f = self.canonicalize()
        g = other.canonicalize()
        p = self.ctx.p

        def lookup(cells, radii, center, min_radius):
            # the unique cell of radius >= min_radius containing the point
            for radius in radii:
                if radius < min_radius:
                    return None
                key = (radius, tuple(reduce_mod_ball(x, radius, p) for x in center.coords))
                hit = cells.get(key)
                if hit is not None:
                    return hit
            return None

        g_cells = {ball.key(): coeff for coeff, ball in g.terms}
        g_radii = sorted({ball.radius_exp for _, ball in g.terms}, reverse=True)
        f_cells = {ball.key(): coeff for coeff, ball in f.terms}
        f_radii = sorted({ball.radius_exp for _, ball in f.terms}, reverse=True)

        total = EC_ZERO
        for cf, bf in f.terms:
            cg = lookup(g_cells, g_radii, bf.center, bf.radius_exp)
            if cg is not None:
                total = total + cf * cg.conjugate() * bf.measure
        for cg, bg in g.terms:
            cf = lookup(f_cells, f_radii, bg.center, bg.radius_exp + 1)
            if cf is not None:
                total = total + cf * cg.conjugate() * bg.measure
        return total

    def l2_norm(self) -> float:
        return math.sqrt(max(0.0, float(self.inner_product(self).re)))

    def sup_norm(self) -> float:
        return max((abs(c) for c, _ in self.canonicalize().terms), default=0.0)

    # -- suprema -----------------------------------------------------------

    def sup_and_argmax(self) -> Supremum:
        """Supremum over Q_p^n of a real-valued function, with a witness.

        The value 0 is always attained outside the (compact) support, so the
        supremum is max(0, cell values); when it is 0 the witness cell is
        None, marking the off-support region.
        """
        f = self.canonicalize()
        if not f.is_real:
            raise ValueError("sup_and_argmax requires a real-valued function")
        best_val: Number = 0
        best_cell: Optional[Ball] = None
        for c, ball in f.terms:
            if c.re > best_val:
                best_val = c.re
                best_cell = ball
        return Supremum(best_val, best_cell)


def linear_combination(
    pairs: Sequence[tuple], ctx: Optional[PrimeContext] = None
) -> BruhatSchwartzFunction:
    """Sum of weight * function pairs, canonicalized once at the end."""
    terms: list = []
    for weight, f in pairs:
        if ctx is None:
            ctx = f.ctx
        elif f.ctx != ctx:
            raise ContextMismatchError(f"{f.ctx} != {ctx}")
        terms.extend((c * weight, b) for c, b in f.terms)
    if ctx is None:
        raise ValueError("empty combination without a context")
    return BruhatSchwartzFunction(ctx, tuple(terms)).canonicalize()


# -- random instances -------------------------------------------------------


@dataclass(frozen=True)
class RandomFunctionConfig:
    """Bounds for the seeded test-function generator.

    Kept deliberately small by default: Fourier-side subdivision grows like
    p**(n * (radius span + denominator depth)), so wide centers at large p^n
    are expensive.  Hard caps: at most 8 terms, radius exponents within
    [-3, 3], center denominators at most p**4.
    """

    max_terms: int = 3
    radius_min: int = -1
    radius_max: int = 1
    num_bound: int = 8
    den_pow_max: int = 1
    coeff_bound: int = 10
    coeff_denominator: int = 16
    complex_coeffs: bool = False

    def validate(self, ctx: PrimeContext) -> None:
        if not (1 <= self.max_terms <= 8):
            raise ValueError("max_terms must be in [1, 8]")
        if not (-3 <= self.radius_min <= self.radius_max <= 3):
            raise ValueError("radius exponents must lie in [-3, 3]")
        if not (0 <= self.den_pow_max <= 4):
            raise ValueError("den_pow_max must be in [0, 4]")
        if self.num_bound > ctx.p**4:
            raise ValueError("center numerators must be bounded by p**4")


def random_test_function(
    seed: int, ctx: PrimeContext, config: RandomFunctionConfig = RandomFunctionConfig()
) -> BruhatSchwartzFunction:
    """Deterministic pseudo-random test function for property batteries."""
    config.validate(ctx)
    rng = random.Random(seed)
    p = ctx.p
    terms = []
    n_terms = rng.randint(1, config.max_terms)
    for _ in range(n_terms):
        r = rng.randint(config.radius_min, config.radius_max)
        coords = []
        for _ in range(ctx.n):
            num = rng.randint(-config.num_bound, config.num_bound)
            den = p ** rng.randint(0, config.den_pow_max)
            coords.append(Fraction(num, den))
        ball = Ball(PAdicVector(tuple(coords), ctx), r)
        d = config.coeff_denominator
        re = Fraction(rng.randint(-config.coeff_bound * d, config.coeff_bound * d), d)
        if config.complex_coeffs:
            im = Fraction(rng.randint(-config.coeff_bound * d, config.coeff_bound * d), d)
        else:
            im = Fraction(0)
        terms.append((ExactComplex(re, im), ball))
    return BruhatSchwartzFunction(ctx, tuple(terms)).canonicalize()


# -- serialization -----------------------------------------------------------


def _num_to_string(x: Number) -> str:
    if isinstance(x, float):
        x = Fraction(x)
    return str(Fraction(x))


def serialize(f: BruhatSchwartzFunction) -> str:
    """Canonical JSON text; identical inputs serialize to identical bytes."""
    f = f.canonicalize()
    obj = {
        "p": f.ctx.p,
        "n": f.ctx.n,
        "terms": [
            {
                "re": _num_to_string(c.re),
                "im": _num_to_string(c.im),
                "center": [_num_to_string(x) for x in ball.center.coords],
                "radius_exp": ball.radius_exp,
            }
            for c, ball in f.terms
        ],
    }
    return json.dumps(obj, separators=(",", ":"))


def _parse_rational(s) -> Fraction:
    if not isinstance(s, str):
        raise FunctionFormatError(f"rational fields must be strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FunctionFormatError(f"malformed rational {s!r}") from exc


def deserialize(text: str) -> BruhatSchwartzFunction:
    """Parse the JSON schema back into a canonical function."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FunctionFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FunctionFormatError("top level must be an object")
    p, n = obj.get("p"), obj.get("n")
    if not isinstance(p, int) or not is_prime(p):
        raise FunctionFormatError(f"p = {p!r} is not a prime integer")
    if not isinstance(n, int) or n < 1:
        raise FunctionFormatError(f"n = {n!r} is not a positive integer")
    ctx = PrimeContext(p, n)
    raw_terms = obj.get("terms")
    if not isinstance(raw_terms, list):
        raise FunctionFormatError("'terms' must be a list")
    terms = []
    for entry in raw_terms:
        if not isinstance(entry, dict):
            raise FunctionFormatError("each term must be an object")
        re = _parse_rational(entry.get("re", "0"))
        im = _parse_rational(entry.get("im", "0"))
        center = entry.get("center")
        if not isinstance(center, list) or len(center) != n:
            raise FunctionFormatError(f"center must list {n} rationals")
        radius = entry.get("radius_exp")
        if not isinstance(radius, int):
            raise FunctionFormatError("radius_exp must be an integer")
        coords = tuple(_parse_rational(x) for x in center)
        terms.append((ExactComplex(re, im), Ball(PAdicVector(coords, ctx), radius)))
    return BruhatSchwartzFunction(ctx, tuple(terms)).canonicalize()
