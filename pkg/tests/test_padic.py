"""Exact arithmetic layer: valuations, norms, characters, shells, balls."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_bessel.padic import (
    ORD_INF,
    ZERO_NORM,
    Ball,
    ContextMismatchError,
    PAdicScalar,
    PAdicVector,
    PrimeContext,
    character,
    char_phase,
    fractional_part,
    is_prime,
    norm_exp_of,
    reduce_mod_ball,
    shell_character_integral,
    shell_measure,
    valuation,
)

C21 = PrimeContext(2, 1)
C31 = PrimeContext(3, 1)
C32 = PrimeContext(3, 2)

rationals = st.fractions(min_value=-60, max_value=60, max_denominator=48)
nonzero_rationals = rationals.filter(lambda q: q != 0)


def test_prime_context_validation():
    with pytest.raises(ValueError):
        PrimeContext(4, 1)
    with pytest.raises(ValueError):
        PrimeContext(1, 1)
    with pytest.raises(ValueError):
        PrimeContext(3, 0)
    assert PrimeContext(2, 3).p_power(-2) == Fraction(1, 4)


def test_is_prime_small_values():
    assert [p for p in range(2, 30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize(
    "x,p,expected",
    [
        (Fraction(9, 2), 3, 2),
        (Fraction(3, 2), 2, -1),
        (Fraction(0), 7, ORD_INF),
        (12, 2, 2),
        (Fraction(1, 27), 3, -3),
    ],
)
def test_valuation(x, p, expected):
    assert valuation(x, p) == expected


@settings(max_examples=200, deadline=None)
@given(nonzero_rationals, nonzero_rationals)
def test_valuation_multiplicative(x, y):
    p = 3
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


@pytest.mark.parametrize(
    "x,p,expected",
    [
        (Fraction(3, 2), 2, Fraction(1, 2)),
        (7, 5, Fraction(0)),
        (Fraction(2, 9), 3, Fraction(2, 9)),
        (Fraction(0), 3, Fraction(0)),
        (Fraction(5, 6), 3, Fraction(1, 3)),
    ],
)
def test_fractional_part(x, p, expected):
    assert fractional_part(x, p) == expected


@settings(max_examples=200, deadline=None)
@given(rationals, st.sampled_from([2, 3, 5]))
def test_fractional_part_properties(x, p):
    q = fractional_part(x, p)
    assert 0 <= q < 1
    # the remainder x - {x}_p is a p-adic integer
    assert valuation(x - q, p) >= 0


@settings(max_examples=500, deadline=None)
@given(rationals, rationals, st.sampled_from([2, 3, 5]))
def test_character_additive_on_phases(a, b, p):
    # chi(a)chi(b) = chi(a+b): the phases agree modulo 1, exactly
    total = char_phase(a, p) + char_phase(b, p) - char_phase(a + b, p)
    assert total.denominator == 1


@pytest.mark.parametrize(
    "y,p,re,im",
    [
        (Fraction(1, 2), 2, -1, 0),
        (Fraction(7), 5, 1, 0),
        (Fraction(1, 4), 2, 0, 1),
        (Fraction(3, 4), 2, 0, -1),
    ],
)
def test_character_exact_values(y, p, re, im):
    c = character(y, p)
    assert (c.re, c.im) == (re, im)
    assert c.is_exact


def test_character_irrational_phase_is_float():
    import math

    c = character(Fraction(1, 5), 5)
    assert not c.is_exact
    assert abs(c.re - math.cos(2 * math.pi / 5)) < 1e-15
    assert abs(c.im - math.sin(2 * math.pi / 5)) < 1e-15


def test_scalar_norms():
    s = PAdicScalar(Fraction(9, 2), PrimeContext(3, 1))
    assert s.valuation == 2
    assert s.norm_exp == -2
    assert s.norm == Fraction(1, 9)
    zero = PAdicScalar(Fraction(0), C21)
    assert zero.norm == 0
    assert zero.norm_exp == ZERO_NORM


def test_vector_norm_examples():
    v = PAdicVector.of(PrimeContext(2, 2), Fraction(1, 2), 4)
    assert v.norm_exp == 1
    assert PAdicVector.zero(C21).norm_exp == ZERO_NORM
    assert norm_exp_of(Fraction(9, 2), 3) == -2


@settings(max_examples=500, deadline=None)
@given(
    st.lists(rationals, min_size=2, max_size=2),
    st.lists(rationals, min_size=2, max_size=2),
)
def test_ultrametric_inequality(a, b):
    x = PAdicVector.of(C32, *a)
    y = PAdicVector.of(C32, *b)
    assert (x + y).norm_exp <= max(x.norm_exp, y.norm_exp)


def test_vector_context_mismatch():
    with pytest.raises(ContextMismatchError):
        PAdicVector.zero(C21) + PAdicVector.zero(C31)


@pytest.mark.parametrize(
    "k,ctx,expected",
    [
        (0, C21, Fraction(1, 2)),
        (1, C32, Fraction(8)),
        (-2, C21, Fraction(1, 8)),
    ],
)
def test_shell_measure(k, ctx, expected):
    assert shell_measure(k, ctx) == expected


def test_shell_measures_sum_to_ball():
    for ctx in (C21, C32):
        total = sum((shell_measure(k, ctx) for k in range(-40, 1)), Fraction(0))
        assert total == 1 - ctx.p_power(-41 * ctx.n)


def test_shell_character_integral_values():
    one_minus = 1 - C32.p_power(-2)
    assert shell_character_integral(0, 0, C32) == one_minus
    assert shell_character_integral(0, 1, C32) == -C32.p_power(-2)
    assert shell_character_integral(0, 3, C32) == 0
    assert shell_character_integral(2, ZERO_NORM, C21) == shell_measure(2, C21)


@pytest.mark.parametrize("ctx", [C21, C32])
def test_shell_character_integral_telescopes_to_ball(ctx):
    # summing the shells of the unit ball (k <= 0) reproduces the ball
    # integral of the character: 1 inside the dual ball, 0 outside
    for m in range(-5, 6):
        deep = ctx.p_power(-10 * ctx.n)
        total = deep + sum(
            (shell_character_integral(k, m, ctx) for k in range(-9, 1)),
            Fraction(0),
        )
        assert total == (1 if m <= 0 else 0)


def test_ball_membership_and_relations():
    ctx = C21
    zero = PAdicVector.zero(ctx)
    unit = Ball(zero, 0)
    small = Ball(PAdicVector.of(ctx, 1), -1)
    far = Ball(PAdicVector.of(ctx, Fraction(1, 4)), -2)
    assert unit.contains(PAdicVector.of(ctx, Fraction(5, 3)))
    assert not unit.contains(PAdicVector.of(ctx, Fraction(1, 2)))
    assert unit.relation(small) == "contains"
    assert small.relation(unit) == "inside"
    assert unit.relation(far) == "disjoint"
    assert small.relation(Ball(PAdicVector.of(ctx, 3), -1)) == "equal"


def test_ball_canonical_center():
    ctx = C21
    b = Ball(PAdicVector.of(ctx, Fraction(1, 3)), -2)
    assert b.canonical().center.coords == (Fraction(3),)
    assert reduce_mod_ball(Fraction(1, 3), -2, 2) == 3
    # same ball regardless of representative
    assert b.key() == Ball(PAdicVector.of(ctx, 3), -2).key()


@pytest.mark.parametrize("ctx", [C21, C32])
def test_ball_children_partition(ctx):
    import random

    ball = Ball(PAdicVector.of(ctx, *([Fraction(1, ctx.p)] * ctx.n)), 1)
    kids = list(ball.children())
    assert len(kids) == ctx.p**ctx.n
    assert sum((k.measure for k in kids), Fraction(0)) == ball.measure
    rng = random.Random(0)
    for _ in range(40):
        x = PAdicVector.of(
            ctx,
            *[
                Fraction(rng.randint(-30, 30), ctx.p ** rng.randint(0, 2))
                for _ in range(ctx.n)
            ],
        )
        inside = [k for k in kids if k.contains(x)]
        assert len(inside) == (1 if ball.contains(x) else 0)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=-2, max_value=2),
    st.integers(min_value=-2, max_value=2),
    rationals,
    rationals,
)
def test_ball_dichotomy(r1, r2, c1, c2):
    b1 = Ball(PAdicVector.of(C31, c1), r1)
    b2 = Ball(PAdicVector.of(C31, c2), r2)
    rel = b1.relation(b2)
    probes = [Fraction(k, 3) for k in range(-12, 13)]
    both = [q for q in probes if b1.contains(PAdicVector.of(C31, q)) and b2.contains(PAdicVector.of(C31, q))]
    if rel == "disjoint":
        assert not both
    else:
        smaller = b1 if b1.radius_exp <= b2.radius_exp else b2
        # every probe of the smaller ball lies in the larger
        for q in probes:
            x = PAdicVector.of(C31, q)
            if smaller.contains(x):
                assert b1.contains(x) and b2.contains(x)
