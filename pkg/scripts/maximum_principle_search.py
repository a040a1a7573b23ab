"""Search random test functions for maximum-principle violations.

The operator averages against a probability kernel, so at a positive global
maximum flanked by heavy negative mass its value can drop below zero; this
script quantifies how often seeded random functions land in that region and
prints the worst offender.  Sign-definite inputs never violate.

Usage: python scripts/maximum_principle_search.py [trials] [seed]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from padic_bessel.padic import PrimeContext  # noqa: E402
from padic_bessel.schwartz import random_test_function, serialize  # noqa: E402
from padic_bessel.bessel import BesselOrder, pmp_check  # noqa: E402

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 42

ctx = PrimeContext(2, 1)
order = BesselOrder(2.5, ctx)

violations = 0
worst = (float("-inf"), None)
for i in range(trials):
    f = random_test_function(seed ^ i, ctx)
    rep = pmp_check(order, f)
    if not rep.passed:
        violations += 1
        if rep.worst > worst[0]:
            worst = (rep.worst, f)

print(f"trials={trials} violations={violations}")
if worst[1] is not None:
    print(f"worst operator value at the argmax: {worst[0]:.6g}")
    print("worst offender:")
    print(serialize(worst[1]))
else:
    print("no violation found (try more trials or wider coefficients)")
