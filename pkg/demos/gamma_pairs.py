#!/usr/bin/env python3

"""gamma_pairs.py

The Kontorovich-Lebedev representation of Gamma(z+is) Gamma(z-is) for
Re z > 0, and its renormalized extension to negative real parts.
"""

import math

from klgamma import gamma_pair, kl_classic_rhs, kl_extended_rhs, kl_mixed_rhs

# For Re z > 0 the pair is a plain K-transform of a power of x
print("classical representation, z = 1")
for s in (0.0, 0.5, 1.0, 2.0):
    rhs = kl_classic_rhs(1.0, s).real
    print(f"  s = {s:3.1f}   integral {rhs:.15f}   Gamma pair {gamma_pair(1.0, s).real:.15f}")

# Below zero the integral diverges at x = 0.  Subtracting the first n+1
# terms of the small-x behaviour (the kernel Psi_n) repairs it, one strip
# -n-1 < Re z < -n at a time.
print("\nextended representation")
for z, n in [(-0.25, 0), (-0.5, 0), (-1.5, 1), (-2.5, 2)]:
    for s in (0.0, 1.0):
        rhs = kl_extended_rhs(z, s, n).real
        exact = gamma_pair(z, s).real
        print(f"  z = {z:5.2f}  n = {n}  s = {s:3.1f}   {rhs:.12e}   rel err {abs(rhs - exact) / exact:.1e}")

# At z = -1/2 the pair is elementary
s = 1.0
print(f"\n|Gamma(-1/2 + i)|^2 = 4 pi / (5 cosh pi) = {4 * math.pi / (5 * math.cosh(math.pi)):.12f}")
print(f"extended representation gives          {kl_extended_rhs(-0.5, s, 0).real:.12f}")

# The mixed form keeps a few poles explicitly and works across strips,
# except where sin(2 pi z) vanishes
print("\nmixed representation, z = -0.25 + 0.4i")
z = complex(-0.25, 0.4)
print("  ", kl_mixed_rhs(z, 0.5, 0))
print("  ", gamma_pair(z, 0.5))
