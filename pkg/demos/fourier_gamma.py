#!/usr/bin/env python3

"""fourier_gamma.py

Fourier transform of |Gamma(a + is)|^2 in s.  For a > 0 it has a closed
form; for negative a the renormalized kernel gives a one-dimensional
representation, checked here against direct integration and, at a = -1/2,
against an elementary closed form.
"""

import numpy as np

from klgamma import fourier_closed_half, fourier_gamma_direct, fourier_gamma_repr, ramanujan_closed

print("a = 1:   direct transform vs closed form")
for xi in (0.0, 1.0, 3.0):
    print(f"  xi = {xi}:  {fourier_gamma_direct(1.0, xi):.15f}  {ramanujan_closed(1.0, xi):.15f}")

print("\na = -1/2: kernel representation, direct transform, closed form")
for xi in np.arange(0.0, 4.5, 1.0):
    r = fourier_gamma_repr(-0.5, xi, 0)
    d = fourier_gamma_direct(-0.5, xi)
    c = fourier_closed_half(xi)
    print(f"  xi = {xi}:  {r:.13f}  {d:.13f}  {c:.13f}")

print("\nother strips")
for a, n in [(-0.25, 0), (-0.75, 0), (-1.5, 1)]:
    r = fourier_gamma_repr(a, 2.0, n)
    d = fourier_gamma_direct(a, 2.0)
    print(f"  a = {a:5.2f}, xi = 2:  {r:.12e}  rel diff {abs(r - d) / abs(d):.1e}")
