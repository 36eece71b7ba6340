#!/usr/bin/env python3

"""kernel_cancellation.py

The kernel Psi_n(x) = 1 + (2/x)^{2z} sum_k 4 (k+z)/(k! Gamma(1-k-2z)) K_{2k+2z}(x)
is a difference of large numbers near x = 0.  Summing it as written loses
everything; the small-x rearrangement keeps full accuracy.
"""

import numpy as np

from klgamma import KernelParams, psi_array
from klgamma.kernel import vanishing_order

p = KernelParams(-1.3, 1)
x = np.geomspace(1e-4, 2.0, 9)

direct = psi_array(x, p, regime="direct_bessel")
series = psi_array(x, p, regime="small_x_series")
print("    x          direct formula          small-x series")
for xi, a, b in zip(x, direct.real, series.real):
    print(f"  {xi:8.2e}   {a: .15e}   {b: .15e}")

# How fast does it vanish?  The slope of log|Psi| against log x should sit at
# the predicted order
xs = np.geomspace(1e-4, 1e-2, 9)
slope = np.polyfit(np.log(xs), np.log(np.abs(psi_array(xs, p))), 1)[0]
print(f"\nmeasured slope {slope:.3f}, predicted order {vanishing_order(p):.3f}, must exceed {-2 * p.z.real:.1f}")

# At half-integer z the rearrangement breaks down (sin 2 pi z = 0); an exact
# rational/log expansion takes over.  For z = -1/2 the kernel is 1 - x K_1(x).
from scipy.special import k1

h = KernelParams(-0.5, 0)
for xi in (1e-3, 0.1, 1.0):
    print(f"z = -1/2, x = {xi:6.3f}:  {psi_array(xi, h).real: .15e}   1 - x K_1(x) = {1 - xi * k1(xi): .15e}")
