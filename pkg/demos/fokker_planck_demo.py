#!/usr/bin/env python3

"""fokker_planck_demo.py

dU/dt = y^2 U_yy + y U_y - (y^2 + p^2) U with U(0, y) = y^p, solved through
the Kontorovich-Lebedev spectrum and cross-checked by finite differences.
For p < 0 discrete Bessel modes have to be subtracted from the spectral
integral.
"""

from klgamma import FPQuery, solve

print("p > 0: spectral integral vs Crank-Nicolson")
for p, t, y in [(1.0, 0.1, 1.0), (2.0, 0.5, 3.0), (0.5, 0.25, 0.5)]:
    a = solve(FPQuery(p, t, y))
    b = solve(FPQuery(p, t, y, method="finite_difference"))
    print(f"  p={p} t={t} y={y}:  {a.value:.10f}  {b.value:.10f}  (fd error est {b.est_error:.1e})")

print("\np < 0: the correction terms")
for p in (-0.5, -1.5, -2.5):
    r = solve(FPQuery(p, 0.25, 1.0))
    fd = solve(FPQuery(p, 0.25, 1.0, method="finite_difference"))
    terms = ", ".join(f"{c:.6f}" for c in r.correction_terms)
    print(f"  p={p}:  U = {r.value:.8f}  fd {fd.value:.8f}  corrections [{terms}]")

print("\nsmall t recovers the initial condition y^p")
for p in (1.0, -0.5):
    r = solve(FPQuery(p, 1e-6, 2.0))
    print(f"  p={p}:  U(1e-6, 2) = {r.value:.8f}   2^p = {2 ** p:.8f}")

print("\nlong times: decay for p > 0, a steady state for -2 < p < 0")
for p in (1.0, -0.5):
    print(f"  p={p}: " + "  ".join(f"{solve(FPQuery(p, t, 1.0)).value:.6f}" for t in (1.0, 5.0, 20.0)))
