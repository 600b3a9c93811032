#!/usr/bin/env python3
"""The ladder of bifurcation values lambda_j.

For each degree j >= 2 the eigencurve sigma_j crosses zero at a unique
lambda_j; the sequence decreases to 0 like the paper's a-priori bound
b_j tan(b_j) = 1/(c_j - N + 1).  This demo prints the ladder for N = 2 and
N = 3 with the transversality slopes.
"""

import math

from serrinband import SpectralCurve, lambda_table

for dim in (2, 3):
    print(f"\nN = {dim}")
    print(f"{'j':>3} {'lambda_j':>12} {'bound b_j':>12} {'sigma_prime':>12} {'residual':>10}")
    points = lambda_table(dim, 10)
    for pt in points:
        curve = SpectralCurve(dim, pt.degree)
        # a-priori upper bound: b tan b = 1/(c_j - N + 1)
        target = 1.0 / (curve.c_const - dim + 1)
        lo, hi = 1e-9, math.pi / 2 - 1e-9
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if mid * math.tan(mid) < target else (lo, mid)
        print(f"{pt.degree:>3} {pt.lambda_star:>12.8f} {hi:>12.8f} "
              f"{pt.sigma_prime:>12.6f} {pt.residual:>10.1e}")

print("\nNote lambda_2(N=2) agrees with atan(1/sqrt(2)) =",
      f"{math.atan(1/math.sqrt(2)):.10f}")
print("CSV version: serrinband bifpoints --dim 2 --jmax 10 --out bifpoints.csv")
