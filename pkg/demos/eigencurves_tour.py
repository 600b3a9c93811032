#!/usr/bin/env python3
"""Tour of the eigenvalue curves sigma_j(lambda).

Walks the three f_j routes on a few (N, j) pairs, prints the curve values
with their two-sided bounds, and writes an eigencurve table you can plot
with the frontend (figure kind "eigencurves").
"""

import math

import numpy as np

from serrinband import SpectralCurve
from serrinband.cli import main as cli_main

print("Three routes to f_j, N = 2, j = 2, lambda = 0.5")
curve = SpectralCurve(2, 2)
f_r = curve.f_riccati(0.5)
f_h = curve.f_heun(0.5)
_, bp1 = curve.b_bvp(0.5, 512)
print(f"  Riccati IVP (adaptive RK): {f_r:.12f}")
print(f"  Heun series:               {f_h:.12f}")
print(f"  b-profile BVP, b'(1)/l:    {bp1 / 0.5:.12f}")
print(f"  two-sided bound: {curve.bounds(0.5)}")

print("\nsigma_j(lambda) for N = 2, j = 0..5 (note sigma_1 = -1 identically):")
lams = np.linspace(0.1, 1.4, 7)
header = "lambda " + "".join(f"sigma_{j:<2d}".rjust(11) for j in range(6))
print(header)
for lam in lams:
    row = f"{lam:6.3f} " + "".join(f"{SpectralCurve(2, j).sigma(lam):11.4f}" for j in range(6))
    print(row)

print("\nDegree-1 curve is flat at -1; degree >= 2 curves cross zero once:")
for j in (2, 3, 4):
    c = SpectralCurve(2, j)
    for lam in (0.2, 0.6, 1.0, 1.4):
        s = c.sigma(lam)
        mark = " <-- sign change bracket" if s > 0 > c.sigma(lam - 0.4) else ""
        print(f"  j={j} sigma({lam:.1f}) = {s:+.4f}{mark}")

print("\nWriting demo_sigma.csv (j = 3, N = 2) via the CLI...")
cli_main(["sigma", "--dim", "2", "--j", "3", "--lambda", "0.05:1.45:29",
          "--out", "demo_sigma.csv"])
print("done; render it with: node frontend/dist/plots.js --kind eigencurves "
      "--input demo_sigma.csv --output sigma.svg")
