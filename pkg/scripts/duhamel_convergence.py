"""Step-halving study for the forced-evolution quadrature.

With constant unit-ball forcing the solution value at the origin solves the
scalar problem u' = -u + 1, so the defect against 1 - exp(-t) isolates the
quadrature error; the ratio column should sit near 16 (fourth order).

Usage: python scripts/duhamel_convergence.py [t]
"""
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from padic_bessel.padic import PAdicVector, PrimeContext  # noqa: E402
from padic_bessel.schwartz import BruhatSchwartzFunction  # noqa: E402
from padic_bessel.bessel import BesselOrder  # noqa: E402
from padic_bessel.heat import EvolutionProblem, duhamel  # noqa: E402

t = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
ctx = PrimeContext(2, 1)
order = BesselOrder(2.0, ctx)
omega = BruhatSchwartzFunction.unit_ball(ctx)
origin = PAdicVector.zero(ctx)
reference = 1 - math.exp(-t)

print("steps,defect,ratio")
previous = None
for steps in (4, 8, 16, 32, 64, 128):
    problem = EvolutionProblem(
        u0=BruhatSchwartzFunction.zero(ctx),
        horizon=max(t, 1.0) * 2,
        forcing=((0.0, omega),),
        steps=steps,
    )
    (u,) = duhamel(problem, order, [t])
    defect = abs(float(u.evaluate(origin).re) - reference)
    ratio = "" if previous is None else f"{previous / defect:.2f}"
    print(f"{steps},{defect:.6e},{ratio}")
    previous = defect
