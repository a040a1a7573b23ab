"""Print kernel and heat tables for a few representative settings.

Usage: python scripts/kernel_tables.py [gamma_max]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from padic_bessel.cli import RunConfig, heat_table, kernel_table  # noqa: E402

gamma_max = int(sys.argv[1]) if len(sys.argv) > 1 else 8

for p, n, alpha in [(2, 1, 2.0), (3, 1, 3.0), (5, 2, 3.5)]:
    cfg = RunConfig(p=p, n=n, alpha=alpha, t=1.0, gamma_max=gamma_max)
    print(f"# convolution kernel, p={p} n={n} alpha={alpha}")
    print(kernel_table(cfg), end="")
    print(f"# heat kernel function part at t=1, p={p} n={n} alpha={alpha}")
    print(heat_table(cfg), end="")
    print()
