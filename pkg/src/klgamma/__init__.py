"""Kontorovich-Lebedev representations of Gamma pairs.

Numerical building blocks (complex Gamma, modified Bessel functions of
complex and imaginary order, double-exponential quadrature), the
renormalized kernel that extends the Gamma-pair representation to negative
real parts, identity checks, and a spectral Fokker-Planck solver.
"""

from .errors import (
    AccuracyWarning,
    BesselOverflowError,
    ConnectionDegenerateError,
    DomainError,
    EnvelopeError,
    EvaluationError,
    GridError,
    KLGammaError,
    PoleError,
    StripMismatchError,
)
from .quadrature import (
    IntegrationResult,
    QuadratureSpec,
    integrate_even_real_line,
    integrate_interval,
    integrate_semi_infinite,
)
from .gamma import cgamma, gamma_pair, loggamma, pochhammer, reflection_gamma, rgamma
from .bessel import bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, bessel_k_via_connection, kiv_array
from .kernel import KernelParams, KernelValue, psi, psi_array, saalschutz_check, tail_series
from .identities import (
    IdentityReport,
    fourier_closed_half,
    fourier_gamma_direct,
    fourier_gamma_repr,
    kl_classic_rhs,
    kl_extended_rhs,
    kl_mixed_rhs,
    mellin_ki_pair,
    ramanujan_closed,
    verify_all,
)
from .fokker_planck import (
    FPQuery,
    FPResult,
    solve,
    solve_finite_difference,
    solve_spectral_double,
    solve_spectral_negative,
    solve_spectral_positive,
)

__version__ = "0.1.0"
