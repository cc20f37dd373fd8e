"""The GDOF curve against alpha: closed form next to measured slopes.

Run: python3 demos/w_curve.py [N]
"""
import sys

import numpy as np

from simocap.bounds import outer_symmetric
from simocap.gdof import estimate_gdof_numeric, gdof_orthogonal, gdof_theorem, gdof_tin
from simocap.rates import inner_symmetric

N = int(sys.argv[1]) if len(sys.argv) > 1 else 2

print(f"N = {N} receive antennas, K = {N + 1} users")
print(f"{'alpha':>6} {'theorem':>8} {'inner':>8} {'outer':>8} {'tin':>6} {'tdma':>6}")
for a in np.round(np.arange(0.1, 2.01, 0.1), 10):
    d = float(gdof_theorem(N, a))
    # slope of the rate between rho = 2^40 and 2^60, median over 5 channels
    di = estimate_gdof_numeric(inner_symmetric, N, a)
    do = estimate_gdof_numeric(outer_symmetric, N, a)
    print(f"{a:6.1f} {d:8.4f} {di:8.4f} {do:8.4f} {float(gdof_tin(a)):6.2f} "
          f"{float(gdof_orthogonal(N)):6.3f}")

# the curve is W-shaped: two dips, at alpha = 1/2 and alpha = 1
print("minima at 1/2 and 1:", gdof_theorem(N, 0.5), gdof_theorem(N, 1.0))
