"""Fourier analysis on test functions and radial shell transforms.

The transform of a single ball indicator is an explicitly modulated
indicator; the modulation is flattened into cells on which the character is
constant, so the image stays inside the indicator representation, exactly.
Radial transforms evaluate Fourier integrals of norm-dependent profiles as
shell sums against exact character integrals, with closed-form summation of
the infinitely many deep shells and a geometric certificate for any
truncated outer tail.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as digit_product
from typing import Callable, Iterator, Optional, Union

from padic_bessel.padic import (
    ZERO_NORM,
    Ball,
    ExactComplex,
    Number,
    PAdicVector,
    PrimeContext,
    ball_measure,
    character_from_phase,
    fractional_part,
    shell_character_integral,
    shell_measure,
)
from padic_bessel.schwartz import BruhatSchwartzFunction


class DivergentTailError(ValueError):
    """The requested shell sum has no convergent tail."""


@dataclass(frozen=True)
class RadialProfile:
    """A function of the norm exponent m (the value at ||x||_p = p**m).

    Stored as ``base + resid(m)`` where ``base`` is the limit at infinity and
    ``resid`` decays; shell sums weight huge exact character integrals
    against the small residual only, so the cancelling bulk is handled in
    exact arithmetic and no precision is lost to it.

    ``deep_pieces`` gives resid on the deep shells m <= deep_cutoff as a sum
    of exact geometric terms A * p**(m*d) (each needs d + n > 0), which the
    transform sums in closed form.  ``support_max`` bounds the residual's
    support from above; unbounded profiles instead declare an ``envelope``
    (C, d) with |resid(m)| <= C * p**(m*d) past the cutoff.
    """

    ctx: PrimeContext
    resid: Callable[[int], Number]
    base: Number = 0
    deep_pieces: tuple = ()
    deep_cutoff: int = 0
    support_max: Optional[int] = None
    envelope: Optional[tuple] = None
    constant_on_unit_ball: bool = False

    def value_at(self, m: Union[int, float]) -> Number:
        """Profile value at norm exponent m; ZERO_NORM means the point 0."""
        if m == ZERO_NORM:
            if self.constant_on_unit_ball:
                return self.base + self.resid(0)
            deep_limit = sum(a for a, d in self.deep_pieces if d == 0)
            return self.base + deep_limit
        return self.base + self.resid(int(m))


def _ball_cells(ball: Ball, target_radius_exp: int) -> Iterator[Ball]:
    """All sub-balls of the given radius exponent, in digit order."""
    if ball.radius_exp == target_radius_exp:
        yield ball
        return
    for child in ball.children():
        yield from _ball_cells(child, target_radius_exp)


def _modulated_cells(dual: Ball, a: PAdicVector, rho: int) -> Iterator[tuple]:
    """(phase character, cell) pairs flattening chi_p(xi . a) on the dual ball.

    Cell centers are digit sums, so the phase of a cell is the digit-weighted
    sum of the per-level phases {p**(-R) a_i}; accumulating it during the
    descent avoids a dot product and digit reduction per cell.
    """
    ctx = dual.ctx
    p, n = ctx.p, ctx.n
    level_phases = {
        (i, level): fractional_part(Fraction(p) ** (-level) * a.coords[i], p)
        for i in range(n)
        for level in range(rho + 1, dual.radius_exp + 1)
    }

    def descend(center_coords, level, phase):
        if level == rho:
            cell = Ball(PAdicVector(center_coords, ctx), rho, known_canonical=True)
            yield character_from_phase(phase), cell
            return
        offset = Fraction(p) ** (-level)
        for digits in digit_product(range(p), repeat=n):
            coords = tuple(c + d * offset for c, d in zip(center_coords, digits))
            bump = sum(
                (d * level_phases[i, level] for i, d in enumerate(digits) if d),
                Fraction(0),
            )
            yield from descend(coords, level - 1, (phase + bump) % 1)

    yield from descend(dual.center.coords, dual.radius_exp, Fraction(0))


def fourier(f: BruhatSchwartzFunction) -> BruhatSchwartzFunction:
    """Fourier transform F f(xi) = integral of chi_p(xi . x) f(x) dx.

    Each indicator of a ball at a maps to p**(rn) * chi_p(xi . a) times the
    indicator of the dual ball at 0; the character factor is constant on
    cells of radius p**v, v the smallest coordinate valuation of a, so the
    dual ball is subdivided to that depth and each cell picks up an exact
    phase.
    """
    f = f.canonicalize()
    ctx = f.ctx
    out = []
    zero = PAdicVector.zero(ctx)
    for c, ball in f.terms:
        r = ball.radius_exp
        scale = ball_measure(r, ctx)
        dual = Ball(zero, -r, known_canonical=True)
        a = ball.center
        if a.is_zero:
            out.append((c * scale, dual))
            continue
        v = int(a.min_valuation)
        rho = min(-r, v)
        if rho == -r:
            out.append((c * scale, dual))
            continue
        for phase, cell in _modulated_cells(dual, a, rho):
            out.append((c * scale * phase, cell))
    return BruhatSchwartzFunction(ctx, tuple(out)).canonicalize()


def inverse_fourier(f: BruhatSchwartzFunction) -> BruhatSchwartzFunction:
    """Inverse transform, realized as the transform followed by reflection."""
    return fourier(f).reflect()


def parseval_defect(f: BruhatSchwartzFunction, g: BruhatSchwartzFunction) -> ExactComplex:
    """<f, g> - <F f, F g>; zero up to rounding of irrational phases."""
    return f.inner_product(g) - fourier(f).inner_product(fourier(g))


def multiply_radial(
    f: BruhatSchwartzFunction, profile: RadialProfile
) -> BruhatSchwartzFunction:
    """Pointwise product of f with a radial profile constant on the unit ball.

    Cells avoiding 0 see a single profile value.  A cell containing 0 with
    positive radius is cut into the unit ball plus its shells, each shell
    into the p**n - 1 cosets away from 0, all carrying constant values.
    """
    if not profile.constant_on_unit_ball:
        raise ValueError("multiplier must be constant on the unit ball")
    f = f.canonicalize()
    ctx = f.ctx
    zero = PAdicVector.zero(ctx)
    out = []
    for c, ball in f.terms:
        a = ball.center
        if not a.is_zero:
            out.append((c * profile.value_at(a.norm_exp), ball))
        elif ball.radius_exp <= 0:
            out.append((c * profile.value_at(0), ball))
        else:
            out.append((c * profile.value_at(0), Ball(zero, 0, known_canonical=True)))
            for k in range(1, ball.radius_exp + 1):
                val = profile.value_at(k)
                shell_ball = Ball(zero, k, known_canonical=True)
                for child in shell_ball.children():
                    if not child.contains_zero:
                        out.append((c * val, child))
    return BruhatSchwartzFunction(ctx, tuple(out)).canonicalize()


def _deep_closed_sum(profile: RadialProfile, top: int) -> float:
    """Sum of resid(k) * shell_measure(k) over all shells k <= top, in
    closed geometric form (valid because top <= deep_cutoff)."""
    p, n = profile.ctx.p, profile.ctx.n
    total = 0.0
    for a, d in profile.deep_pieces:
        e = float(d) + n
        if e <= 0:
            raise DivergentTailError(f"deep geometric piece with d + n = {e} <= 0")
        total += float(a) * (1.0 - p ** float(-n)) * p ** (top * e) / (1.0 - p ** (-e))
    return total


def _char_ball_sum(top: int, m: int, ctx: PrimeContext) -> Fraction:
    """Exact sum of shell_character_integral(k, m) over all k <= top."""
    if top <= -m:
        return ctx.p_power(top * ctx.n)
    if top == 1 - m:
        return Fraction(0)
    raise ValueError("character integrals vanish beyond k = 1 - m")


def radial_transform(
    profile: RadialProfile,
    xi_norm_exp: Union[int, float],
    truncation: Optional[int] = None,
) -> tuple:
    """(F g)(xi) for a radial profile g, as a shell sum; returns (value, tail).

    For a finite frequency exponent m the character integrals vanish above
    the shell 1 - m, so the sum is finite and tail = 0 unless an explicit
    smaller truncation is requested; then the skipped shells are bounded by
    the declared envelope.  At xi = 0 (ZERO_NORM) the profile must have zero
    base and a summable envelope or bounded support.
    """
    ctx = profile.ctx
    p, n = ctx.p, ctx.n
    m = xi_norm_exp
    if m == ZERO_NORM:
        if profile.base != 0:
            raise DivergentTailError("constant part is not integrable at zero frequency")
        if profile.support_max is not None:
            k_top = profile.support_max
            tail = 0.0
        else:
            if profile.envelope is None or truncation is None:
                raise DivergentTailError(
                    "unbounded profile at zero frequency needs an envelope and a truncation"
                )
            big_c, d = profile.envelope
            if n + float(d) >= 0:
                raise DivergentTailError(f"envelope decay d = {d} does not beat the shell growth")
            k_top = truncation
            tail = (
                float(big_c)
                * (1.0 - p ** float(-n))
                * p ** ((k_top + 1) * (n + float(d)))
                / (1.0 - p ** (n + float(d)))
            )
        k_lo = min(profile.deep_cutoff, k_top)
        total = _deep_closed_sum(profile, k_lo - 1)
        for k in range(k_lo, k_top + 1):
            total += float(shell_measure(k, ctx)) * float(profile.resid(k))
        return total, tail

    m = int(m)
    k_full = 1 - m
    k_top = k_full if profile.support_max is None else min(k_full, profile.support_max)
    tail = 0.0
    if truncation is not None and truncation < k_top:
        if profile.envelope is None:
            raise DivergentTailError("truncation below the support needs an envelope")
        big_c, d = profile.envelope
        tail = sum(
            float(shell_measure(k, ctx)) * float(big_c) * p ** (k * float(d))
            for k in range(truncation + 1, k_top + 1)
        )
        k_top = truncation
    total = 0.0
    if profile.base != 0:
        total += float(profile.base) * float(_char_ball_sum(k_top, m, ctx))
    k_lo = min(profile.deep_cutoff, -m, k_top)
    total += _deep_closed_sum(profile, k_lo - 1)
    for k in range(k_lo, k_top + 1):
        c = shell_character_integral(k, m, ctx)
        if c:
            total += float(c) * float(profile.resid(k))
    return total, tail
