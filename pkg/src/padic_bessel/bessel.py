"""The Bessel multiplier, its convolution kernel, and the operator battery.

The operator acts on test functions through two independent routes: as a
Fourier multiplier (symbol side) and as convolution against the explicit
radial kernel (space side).  Both are exact up to character phases, and the
verification operations below check the dissipativity, self-adjointness,
contraction, maximum-principle and resolvent statements on concrete inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from padic_bessel.padic import (
    EC_ZERO,
    ZERO_NORM,
    Ball,
    ExactComplex,
    Number,
    PAdicVector,
    PrimeContext,
    shell_measure,
)
from padic_bessel.schwartz import BruhatSchwartzFunction, Supremum
from padic_bessel.spectral import (
    RadialProfile,
    fourier,
    inverse_fourier,
    multiply_radial,
    radial_transform,
)


@dataclass(frozen=True)
class BesselOrder:
    """Order alpha of the operator, constrained to alpha > n.

    The constraint makes the kernel prefactor negative, which is what the
    sign analysis of the kernel and the heat profile rests on.
    """

    alpha: float
    ctx: PrimeContext

    def __post_init__(self) -> None:
        if not self.alpha > self.ctx.n:
            raise ValueError(
                f"order alpha = {self.alpha} must exceed the dimension n = {self.ctx.n}"
            )

    @property
    def alpha_is_integer(self) -> bool:
        return float(self.alpha).is_integer()


def padic_gamma(alpha: float, ctx: PrimeContext) -> Number:
    """The n-dimensional p-adic gamma factor (1 - p**(alpha-n)) / (1 - p**-alpha).

    Exact rational when alpha is an integer; negative for every alpha > n.
    """
    if alpha == 0:
        raise ValueError("gamma factor undefined at alpha = 0")
    p, n = ctx.p, ctx.n
    if float(alpha).is_integer():
        a = int(alpha)
        return (1 - Fraction(p) ** (a - n)) / (1 - Fraction(p) ** (-a))
    return (1.0 - p ** (alpha - n)) / (1.0 - p ** (-alpha))


def symbol_value(m: Union[int, float], order: BesselOrder) -> Number:
    """Multiplier value at frequency norm exponent m: max(1, p**m)**(-alpha)."""
    if m == ZERO_NORM or m <= 0:
        return 1
    p = order.ctx.p
    if order.alpha_is_integer:
        return Fraction(1, p ** (int(m) * int(order.alpha)))
    return p ** (-int(m) * order.alpha)


def symbol_profile(order: BesselOrder) -> RadialProfile:
    """The multiplier as a radial profile (1 on the unit ball, decaying above)."""
    return RadialProfile(
        ctx=order.ctx,
        resid=lambda k: symbol_value(k, order),
        base=0,
        deep_pieces=((1, 0),),
        deep_cutoff=0,
        support_max=None,
        envelope=(1.0, -order.alpha),
        constant_on_unit_ball=True,
    )


def kernel_value(m: Union[int, float], alpha: float, ctx: PrimeContext) -> Number:
    """Radial convolution kernel at norm exponent m; zero outside the unit ball.

    The alpha == n branch replaces the vanishing gamma factor by the
    logarithmic profile; for alpha > n the value at the origin (ZERO_NORM)
    is the finite limit of the shell values.
    """
    p, n = ctx.p, ctx.n
    if m != ZERO_NORM and m >= 1:
        return 0
    if alpha == n:
        if m == ZERO_NORM:
            raise ValueError("logarithmic kernel is unbounded at the origin")
        return (1 - Fraction(p) ** (-n)) * (1 - int(m))
    gamma = padic_gamma(alpha, ctx)
    if m == ZERO_NORM:
        if alpha < n:
            raise ValueError("kernel unbounded at the origin for alpha < n")
        if isinstance(gamma, Fraction) and float(alpha).is_integer():
            return -(Fraction(p) ** (int(alpha) - n)) / gamma
        return -(p ** (alpha - n)) / float(gamma)
    m = int(m)
    if isinstance(gamma, Fraction) and float(alpha).is_integer():
        a = int(alpha)
        return (Fraction(p) ** (m * (a - n)) - Fraction(p) ** (a - n)) / gamma
    return (p ** (m * (alpha - n)) - p ** (alpha - n)) / float(gamma)


def kernel_profile(order: BesselOrder) -> RadialProfile:
    """Kernel as a radial profile with exact geometric deep-shell pieces."""
    ctx = order.ctx
    alpha = order.alpha
    gamma = float(padic_gamma(alpha, ctx))
    p, n = ctx.p, ctx.n
    return RadialProfile(
        ctx=ctx,
        resid=lambda k: kernel_value(k, alpha, ctx),
        base=0,
        deep_pieces=((1.0 / gamma, alpha - n), (-(p ** (alpha - n)) / gamma, 0)),
        deep_cutoff=0,
        support_max=0,
    )


def kernel_ball_mass(radius_exp: int, order: BesselOrder) -> float:
    """Integral of the kernel over the ball of radius p**radius_exp at 0.

    Closed geometric form; equals the total mass (which is 1) for any
    nonnegative radius.
    """
    ctx = order.ctx
    p, n, alpha = ctx.p, ctx.n, order.alpha
    top = min(radius_exp, 0)
    gamma = float(padic_gamma(alpha, ctx))
    return (
        (1.0 - p ** float(-n)) * p ** (top * alpha) / (1.0 - p ** (-alpha))
        - p ** (alpha - n + top * n)
    ) / gamma


def kernel_mass(order: BesselOrder) -> float:
    """Total integral of the kernel (analytically 1)."""
    return kernel_ball_mass(0, order)


def kernel_partial_mass(gamma_max: int, order: BesselOrder) -> float:
    """Mass of the shells down to ||x|| = p**(-gamma_max); increases to 1."""
    ctx = order.ctx
    total = 0.0
    for g in range(gamma_max + 1):
        total += float(shell_measure(-g, ctx)) * float(kernel_value(-g, order.alpha, ctx))
    return total


def khat_defect(
    order: BesselOrder, xi_norm_exp: Union[int, float], truncation: Optional[int] = None
) -> float:
    """|shell-sum transform of the kernel - multiplier| at one frequency."""
    value, _tail = radial_transform(kernel_profile(order), xi_norm_exp, truncation)
    return abs(value - float(symbol_value(xi_norm_exp, order)))


# -- the operator ------------------------------------------------------------


def apply_bessel(order: BesselOrder, f: BruhatSchwartzFunction) -> BruhatSchwartzFunction:
    """Multiplier route: transform, scale by the symbol, transform back."""
    return inverse_fourier(multiply_radial(fourier(f), symbol_profile(order)))


def apply_bessel_convolution(
    order: BesselOrder, f: BruhatSchwartzFunction, x: PAdicVector
) -> ExactComplex:
    """Convolution route, evaluated at a point.

    The shell sum over the kernel support terminates exactly: below the
    constancy radius of f the translate f(x - y) is constant in y, and the
    remaining kernel mass is added in closed form, so no truncation error
    enters.
    """
    f = f.canonicalize()
    if not f.terms:
        return EC_ZERO
    ell = min(ball.radius_exp for _, ball in f.terms)
    alpha, ctx = order.alpha, order.ctx
    total = f.evaluate(x) * kernel_ball_mass(ell, order)
    for k in range(min(ell, 0) + 1, 1):
        ring = f.ball_integral(Ball(x, k)) - f.ball_integral(Ball(x, k - 1))
        if not ring.is_zero():
            total = total + ring * kernel_value(k, alpha, ctx)
    return total


def resolvent(
    order: BesselOrder, lam: Number, f: BruhatSchwartzFunction
) -> BruhatSchwartzFunction:
    """Solve (lam + operator) u = f by dividing by lam + symbol on the
    Fourier side; safe because the divisor is at least lam > 0."""
    if not lam > 0:
        raise ValueError(f"resolvent parameter lam = {lam} must be positive")

    def weight_value(k: int) -> Number:
        denom = lam + symbol_value(k, order)
        if isinstance(denom, float):
            return 1.0 / denom
        return Fraction(1) / Fraction(denom)

    weight = RadialProfile(
        ctx=order.ctx,
        resid=weight_value,
        constant_on_unit_ball=True,
    )
    return inverse_fourier(multiply_radial(fourier(f), weight))


def resolvent_residual(
    order: BesselOrder,
    lam: Number,
    f: BruhatSchwartzFunction,
    u: Optional[BruhatSchwartzFunction] = None,
) -> float:
    """Sup norm of (lam + operator) u - f."""
    if u is None:
        u = resolvent(order, lam, f)
    return (u.scale(lam) + apply_bessel(order, u) - f).sup_norm()


# -- verification battery ----------------------------------------------------


def quadratic_form(order: BesselOrder, f: BruhatSchwartzFunction) -> float:
    """<-(operator) f, f>, computed on the Fourier side; dissipativity means
    this never exceeds rounding."""
    fhat = fourier(f)
    weighted = multiply_radial(fhat, symbol_profile(order))
    return -float(weighted.inner_product(fhat).re)


def adjoint_defect(
    order: BesselOrder, f: BruhatSchwartzFunction, g: BruhatSchwartzFunction
) -> ExactComplex:
    """<-(operator) f, g> - <f, -(operator) g>; zero for a self-adjoint operator."""
    jf = apply_bessel(order, f)
    jg = apply_bessel(order, g)
    return f.inner_product(jg) - jf.inner_product(g)


def contraction_ratio(order: BesselOrder, f: BruhatSchwartzFunction) -> float:
    """||operator f||_2 / ||f||_2; at most 1 because the symbol is."""
    denom = f.l2_norm()
    if denom == 0.0:
        raise ValueError("contraction ratio undefined for the zero function")
    return apply_bessel(order, f).l2_norm() / denom


def c0_dissipativity_margin(
    order: BesselOrder, f: BruhatSchwartzFunction, lam: float
) -> float:
    """||lam f + operator f||_sup - lam ||f||_sup, which must be >= 0.

    Exact cell maxima on both sides; the margin is returned so callers can
    allow float slack.
    """
    if not lam > 0:
        raise ValueError(f"lam = {lam} must be positive")
    if not f.is_real:
        raise ValueError("sup-norm dissipativity is checked on real functions")
    shifted = f.scale(lam) + apply_bessel(order, f)
    return shifted.sup_norm() - lam * f.sup_norm()


@dataclass(frozen=True)
class PmpReport:
    """Positive-maximum-principle check at the exact global argmax.

    When the supremum 0 is only attained off the support, each off-support
    norm regime contributes a probe point; ``worst`` is the largest operator
    value seen and must not exceed the tolerance.
    """

    sup_value: Number
    witness_cell: Optional[Ball]
    probes: tuple
    worst: float
    passed: bool


def pmp_check(order: BesselOrder, f: BruhatSchwartzFunction, tol: float = 1e-12) -> PmpReport:
    """Evaluate -(operator) f at a nonnegative global maximum of f.

    Uses the convolution route, which is pointwise exact.  For an off-support
    supremum the probes are one point far outside the support and, when the
    support misses the unit ball entirely, the origin.
    """
    f = f.canonicalize()
    sup: Supremum = f.sup_and_argmax()
    ctx = order.ctx
    probes = []
    if sup.cell is not None:
        probes.append(sup.cell.center)
    else:
        level = f.support_norm_exp()
        outside_exp = (0 if level == ZERO_NORM else max(int(level), 0)) + 1
        coords = [Fraction(1, ctx.p**outside_exp)] + [Fraction(0)] * (ctx.n - 1)
        probes.append(PAdicVector(tuple(coords), ctx))
        unit = Ball(PAdicVector.zero(ctx), 0)
        if all(ball.relation(unit) == "disjoint" for _, ball in f.terms):
            probes.append(PAdicVector.zero(ctx))
    evaluated = tuple(
        (x, -float(apply_bessel_convolution(order, f, x).re)) for x in probes
    )
    worst = max(v for _, v in evaluated)
    return PmpReport(
        sup_value=sup.value,
        witness_cell=sup.cell,
        probes=evaluated,
        worst=worst,
        passed=worst <= tol,
    )


def negdef_witness(order: BesselOrder) -> tuple:
    """Smallest shell exponent m >= 1 where the one-point quadratic form
    2 * symbol(p**m) - symbol(0) goes negative, with that value.

    A negative-definite symbol would keep this nonnegative; the Bessel
    multiplier fails it already at m = 1 for every admissible order.
    """
    for m in range(1, 64):
        value = 2 * symbol_value(m, order) - symbol_value(0, order)
        if value < 0:
            return m, value
    raise AssertionError("no witness found; symbol should decay below 1/2")
