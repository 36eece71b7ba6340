"""Exception and warning types raised across the package."""

import math


class KLGammaError(Exception):
    """Base class for all errors raised by klgamma."""


class DomainError(KLGammaError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """A Gamma factor is evaluated at (or within 1e-14 of) a pole.

    The offending non-positive integer is stored in ``integer``.
    """

    def __init__(self, integer, message=None):
        self.integer = int(integer)
        super().__init__(message or f"Gamma pole at {self.integer}")


class StripMismatchError(DomainError):
    """The real part of a parameter is not inside the strip selected by ``n``."""

    def __init__(self, value, n, required_n=None):
        self.value = value
        self.n = n
        self.required_n = required_n
        msg = f"Re parameter {getattr(value, 'real', value)!r} is not in (-{n}-1, -{n})"
        if required_n is not None:
            msg += f"; use n={required_n}"
        super().__init__(msg)


class EnvelopeError(DomainError):
    """Parameters fall outside the validated numerical envelope."""


class ConnectionDegenerateError(DomainError):
    """``sin(pi*nu)`` is too close to zero for the I-connection formula."""


class EvaluationError(KLGammaError, ArithmeticError):
    """An integrand returned a non-finite value."""


class BesselOverflowError(KLGammaError, OverflowError):
    """The unscaled Bessel value does not fit in a double."""


class GridError(DomainError):
    """Finite-difference grid is too coarse or does not cover the query point."""


class AccuracyWarning(UserWarning):
    """Result computed, but outside the range where the accuracy target holds."""


def strip_index(re_z):
    """Return ``n`` such that ``-n-1 < re_z < -n``, or None if ``re_z`` is not
    strictly inside any such strip (``re_z >= 0`` or an integer)."""
    if re_z >= 0 or float(re_z).is_integer():
        return None
    return int(math.floor(-re_z))
