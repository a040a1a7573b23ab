"""Command-line front end: kernel and heat tables, transforms, evolution
runs, and the seeded verification batteries.

Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage or
input errors.  All outputs are deterministic for fixed flags and seed;
floats are printed with 17 significant digits so CSV values round-trip.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from padic_bessel.padic import PrimeContext
from padic_bessel.schwartz import (
    BruhatSchwartzFunction,
    RandomFunctionConfig,
    deserialize,
    random_test_function,
    serialize,
)
from padic_bessel.spectral import fourier, parseval_defect
from padic_bessel.bessel import (
    BesselOrder,
    adjoint_defect,
    c0_dissipativity_margin,
    contraction_ratio,
    kernel_mass,
    kernel_value,
    negdef_witness,
    pmp_check,
    quadratic_form,
    resolvent_residual,
)
from padic_bessel.heat import (
    EvolutionProblem,
    convolution_defect,
    distributional_mass,
    duhamel,
    tail_envelope,
    z_closed,
    z_mass,
    z_oracle,
    z_value,
)

SUITES = (
    "pmp",
    "dissipative",
    "selfadjoint",
    "contraction",
    "resolvent",
    "fourier",
    "heat",
    "negdef",
    "all",
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters shared by the subcommands."""

    p: int = 2
    n: int = 1
    alpha: float = 2.0
    t: float = 1.0
    gamma_max: int = 10
    tol: Optional[float] = None
    seed: int = 0
    trials: int = 200
    steps: int = 64

    def context(self) -> PrimeContext:
        return PrimeContext(self.p, self.n)

    def order(self) -> BesselOrder:
        return BesselOrder(self.alpha, self.context())


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# -- tables -------------------------------------------------------------------


def kernel_table(cfg: RunConfig) -> str:
    order = cfg.order()
    lines = ["gamma,norm,k_alpha"]
    if cfg.gamma_max >= 0:
        p = cfg.p
        for g in range(cfg.gamma_max + 1):
            k = float(kernel_value(-g, cfg.alpha, order.ctx))
            lines.append(f"{g},{_fmt(p ** (-g))},{_fmt(k)}")
        mass = kernel_mass(order)
        lines.append(f"mass,{_fmt(mass)},{_fmt(abs(mass - 1.0))}")
    return "\n".join(lines) + "\n"


def heat_table(cfg: RunConfig) -> str:
    order = cfg.order()
    t = cfg.t
    lines = ["gamma,norm,z_value,tail_bound"]
    if cfg.gamma_max >= 0:
        p = cfg.p
        for g in range(cfg.gamma_max + 1):
            z = z_closed(g, t, order)
            lines.append(f"{g},{_fmt(p ** (-g))},{_fmt(z)},{_fmt(tail_envelope(g, t, order))}")
        zm = z_mass(t, order)
        dist = distributional_mass(t, order)
        defect = abs(zm - math.expm1(-t))
        lines.append(f"mass,{_fmt(zm)},{_fmt(dist)},{_fmt(defect)}")
    return "\n".join(lines) + "\n"


# -- file-driven commands -------------------------------------------------------


def _load_function(path: str) -> BruhatSchwartzFunction:
    with open(path) as fh:
        return deserialize(fh.read())


def run_fourier(ns: argparse.Namespace) -> int:
    f = _load_function(ns.infile)
    if ns.p is not None and ns.p != f.ctx.p:
        raise ValueError(f"--p {ns.p} does not match the input file's p = {f.ctx.p}")
    if ns.n is not None and ns.n != f.ctx.n:
        raise ValueError(f"--n {ns.n} does not match the input file's n = {f.ctx.n}")
    transformed = fourier(f)
    if ns.roundtrip:
        doubled = fourier(transformed)
        defect = (doubled - f.reflect()).sup_norm()
        payload = {
            "transform": json.loads(serialize(transformed)),
            "double_transform": json.loads(serialize(doubled)),
            "roundtrip_defect": float(defect),
        }
        _emit(json.dumps(payload, separators=(",", ":")) + "\n", ns.out)
    else:
        _emit(serialize(transformed) + "\n", ns.out)
    return 0


def _load_forcing(path: str) -> tuple:
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict):
        obj = obj.get("schedule")
    if not isinstance(obj, list):
        raise ValueError("forcing file must hold a list (or {'schedule': [...]})")
    schedule = []
    for entry in obj:
        if not isinstance(entry, dict) or "time" not in entry or "function" not in entry:
            raise ValueError("each forcing entry needs 'time' and 'function'")
        schedule.append(
            (float(entry["time"]), deserialize(json.dumps(entry["function"])))
        )
    return tuple(schedule)


def run_evolve(ns: argparse.Namespace) -> int:
    u0 = _load_function(ns.infile)
    if ns.p is not None and ns.p != u0.ctx.p:
        raise ValueError(f"--p {ns.p} does not match the input file's p = {u0.ctx.p}")
    if ns.n is not None and ns.n != u0.ctx.n:
        raise ValueError(f"--n {ns.n} does not match the input file's n = {u0.ctx.n}")
    alpha = ns.alpha if ns.alpha is not None else 2.0
    order = BesselOrder(alpha, u0.ctx)
    times = [float(s) for s in ns.t.split(",") if s.strip() != ""]
    if not times:
        raise ValueError("--t must list at least one evaluation time")
    horizon = ns.horizon if ns.horizon is not None else max(times)
    forcing = _load_forcing(ns.forcing) if ns.forcing else ()
    problem = EvolutionProblem(u0=u0, horizon=horizon, forcing=forcing, steps=ns.steps)
    solutions = duhamel(problem, order, times)
    lines = ["time,l2_norm,sup_norm"]
    for t, u in zip(times, solutions):
        lines.append(f"{_fmt(t)},{_fmt(u.l2_norm())},{_fmt(u.sup_norm())}")
    _emit("\n".join(lines) + "\n", ns.out)
    if ns.snapshots:
        for idx, u in enumerate(solutions):
            with open(f"{ns.snapshots}{idx}.json", "w") as fh:
                fh.write(serialize(u) + "\n")
    return 0


# -- verification suites ---------------------------------------------------------


def _trial_seed(seed: int, i: int) -> int:
    return seed ^ i


def _random_f(seed: int, ctx: PrimeContext, complex_coeffs: bool = False):
    # integer centers once p**n is large: modulation flattening costs
    # p**(n * denominator depth) cells per term
    cfg = RandomFunctionConfig(
        complex_coeffs=complex_coeffs,
        den_pow_max=1 if ctx.p**ctx.n <= 9 else 0,
    )
    return random_test_function(seed, ctx, cfg)


def suite_pmp(cfg: RunConfig) -> list:
    order = cfg.order()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst = -math.inf
    ok = True
    for i in range(cfg.trials):
        f = _random_f(_trial_seed(cfg.seed, i), order.ctx)
        report = pmp_check(order, f, tol)
        worst = max(worst, report.worst)
        ok = ok and report.passed
    return [("pmp", cfg.trials, worst, tol, ok)]


def suite_dissipative(cfg: RunConfig) -> list:
    order = cfg.order()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst = -math.inf
    for i in range(cfg.trials):
        f = _random_f(_trial_seed(cfg.seed, i), order.ctx, complex_coeffs=True)
        worst = max(worst, quadratic_form(order, f))
    rows = [("dissipative_l2", cfg.trials, worst, tol, worst <= tol)]
    pairs = max(1, cfg.trials // 2)
    margin_worst = math.inf
    for i in range(pairs):
        f = _random_f(_trial_seed(cfg.seed, 10_000 + i), order.ctx)
        lam = 0.1 + (i % 20) * 0.5
        margin_worst = min(margin_worst, c0_dissipativity_margin(order, f, lam))
    rows.append(("dissipative_sup", pairs, -margin_worst, tol, margin_worst >= -tol))
    return rows


def suite_selfadjoint(cfg: RunConfig) -> list:
    order = cfg.order()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst = 0.0
    for i in range(cfg.trials):
        f = _random_f(_trial_seed(cfg.seed, i), order.ctx, complex_coeffs=True)
        g = _random_f(_trial_seed(cfg.seed, 50_000 + i), order.ctx, complex_coeffs=True)
        worst = max(worst, abs(adjoint_defect(order, f, g)))
    return [("selfadjoint", cfg.trials, worst, tol, worst <= tol)]


def suite_contraction(cfg: RunConfig) -> list:
    order = cfg.order()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst = 0.0
    for i in range(cfg.trials):
        f = _random_f(_trial_seed(cfg.seed, i), order.ctx, complex_coeffs=True)
        if f.is_zero:
            continue
        worst = max(worst, contraction_ratio(order, f) - 1.0)
    return [("contraction", cfg.trials, worst, tol, worst <= tol)]


def suite_resolvent(cfg: RunConfig) -> list:
    order = cfg.order()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst = 0.0
    trials = max(1, cfg.trials // 3)
    for i in range(trials):
        f = _random_f(_trial_seed(cfg.seed, i), order.ctx)
        for lam in (0.1, 1, 10):
            worst = max(worst, resolvent_residual(order, lam, f))
    return [("resolvent", trials * 3, worst, tol, worst <= tol)]


def suite_fourier(cfg: RunConfig) -> list:
    ctx = cfg.context()
    tol = cfg.tol if cfg.tol is not None else 1e-12
    worst_pars = 0.0
    worst_refl = 0.0
    for i in range(cfg.trials):
        f = _random_f(_trial_seed(cfg.seed, i), ctx, complex_coeffs=True)
        g = _random_f(_trial_seed(cfg.seed, 50_000 + i), ctx, complex_coeffs=True)
        worst_pars = max(worst_pars, abs(parseval_defect(f, g)))
        worst_refl = max(worst_refl, (fourier(fourier(f)) - f.reflect()).sup_norm())
    return [
        ("fourier_parseval", cfg.trials, worst_pars, tol, worst_pars <= tol),
        ("fourier_reflection", cfg.trials, worst_refl, tol, worst_refl <= tol),
    ]


def suite_heat(cfg: RunConfig) -> list:
    order = cfg.order()
    tol_pair = cfg.tol if cfg.tol is not None else 1e-12
    tol_mass = cfg.tol if cfg.tol is not None else 1e-10
    tol_conv = cfg.tol if cfg.tol is not None else 1e-9
    worst_pair = 0.0
    worst_mass = 0.0
    for t in (0.1, 1.0, 10.0):
        for g in range(13):
            worst_pair = max(worst_pair, abs(z_closed(g, t, order) - z_oracle(g, t, order)))
        worst_mass = max(worst_mass, abs(z_mass(t, order) - math.expm1(-t)))
        worst_mass = max(worst_mass, abs(distributional_mass(t, order) - math.exp(-t)))
    sign_ok = all(
        z_closed(g, t, order) < 0 for t in (0.1, 1.0, 10.0) for g in range(13)
    ) and all(z_value(m, 1.0, order) == 0.0 for m in range(1, 4))
    worst_conv = 0.0
    for t1, t2 in ((0.5, 0.5), (1.0, 2.0)):
        for g in (0, 1, 3):
            d, _ = convolution_defect(t1, t2, g, order)
            worst_conv = max(worst_conv, d)
    return [
        ("heat_dual_route", 39, worst_pair, tol_pair, worst_pair <= tol_pair),
        ("heat_sign_support", 42, 0.0 if sign_ok else 1.0, 0.0, sign_ok),
        ("heat_mass", 6, worst_mass, tol_mass, worst_mass <= tol_mass),
        ("heat_convolution", 6, worst_conv, tol_conv, worst_conv <= tol_conv),
    ]


def suite_negdef(cfg: RunConfig) -> list:
    order = cfg.order()
    shell, value = negdef_witness(order)
    return [(f"negdef_shell_{shell}", 1, float(value), 0.0, value < 0)]


def run_verify(ns: argparse.Namespace) -> int:
    cfg = RunConfig(
        p=ns.p if ns.p is not None else 2,
        n=ns.n if ns.n is not None else 1,
        alpha=ns.alpha if ns.alpha is not None else 2.0,
        tol=ns.tol,
        seed=ns.seed,
        trials=ns.trials,
    )
    runners = {
        "pmp": suite_pmp,
        "dissipative": suite_dissipative,
        "selfadjoint": suite_selfadjoint,
        "contraction": suite_contraction,
        "resolvent": suite_resolvent,
        "fourier": suite_fourier,
        "heat": suite_heat,
        "negdef": suite_negdef,
    }
    names = list(runners) if ns.suite == "all" else [ns.suite]
    lines = []
    all_ok = True
    for name in names:
        for check, trials, worst, tol, ok in runners[name](cfg):
            all_ok = all_ok and ok
            lines.append(
                f"check={check} trials={trials} worst={_fmt(worst)} "
                f"tol={_fmt(tol)} {'PASS' if ok else 'FAIL'}"
            )
    lines.append(f"overall: {'PASS' if all_ok else 'FAIL'}")
    _emit("\n".join(lines) + "\n", ns.out)
    return 0 if all_ok else 1


# -- argument parsing -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-bessel",
        description="Bessel-potential operator tables, transforms, evolution and verification on Q_p^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime p (default 2)")
    common.add_argument("--n", type=int, default=None, help="dimension n (default 1)")
    common.add_argument("--alpha", type=float, default=None, help="operator order (default 2.0)")
    common.add_argument("--tol", type=float, default=None, help="override check tolerances")
    common.add_argument("--seed", type=int, default=0, help="base seed for random batteries")
    common.add_argument("--out", type=str, default=None, help="output path (default stdout)")

    sp = sub.add_parser("kernel", parents=[common], help="CSV table of the convolution kernel")
    sp.add_argument("--gamma-max", type=int, default=10)

    sp = sub.add_parser("heat", parents=[common], help="CSV table of the heat kernel's function part")
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--gamma-max", type=int, default=10)

    sp = sub.add_parser("fourier", parents=[common], help="Fourier transform of a serialized function")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--roundtrip", action="store_true", help="also emit the double transform and its reflection defect")

    sp = sub.add_parser("evolve", parents=[common], help="evolve an initial datum, optionally with forcing")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--forcing", type=str, default=None)
    sp.add_argument("--t", type=str, required=True, help="comma-separated evaluation times")
    sp.add_argument("--horizon", type=float, default=None)
    sp.add_argument("--steps", type=int, default=64)
    sp.add_argument("--snapshots", type=str, default=None, help="prefix for per-time JSON snapshots")

    sp = sub.add_parser("verify", parents=[common], help="run a named verification battery")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--trials", type=int, default=200)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "kernel":
            cfg = RunConfig(
                p=ns.p if ns.p is not None else 2,
                n=ns.n if ns.n is not None else 1,
                alpha=ns.alpha if ns.alpha is not None else 2.0,
                gamma_max=ns.gamma_max,
            )
            cfg.order()
            _emit(kernel_table(cfg), ns.out)
            return 0
        if ns.command == "heat":
            if not ns.t > 0:
                raise ValueError(f"--t {ns.t} must be positive")
            cfg = RunConfig(
                p=ns.p if ns.p is not None else 2,
                n=ns.n if ns.n is not None else 1,
                alpha=ns.alpha if ns.alpha is not None else 2.0,
                t=ns.t,
                gamma_max=ns.gamma_max,
            )
            cfg.order()
            _emit(heat_table(cfg), ns.out)
            return 0
        if ns.command == "fourier":
            return run_fourier(ns)
        if ns.command == "evolve":
            return run_evolve(ns)
        if ns.command == "verify":
            return run_verify(ns)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {ns.command!r}")


if __name__ == "__main__":
    sys.exit(main())
