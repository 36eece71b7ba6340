"""Complex Gamma function and friends.

A single Lanczos kernel (g = 671/128, fifteen terms) evaluated in logarithmic form on
``Re w >= 1/2``, extended to the left half plane by the reflection formula.
Values are Python ``complex`` numbers; the ``*_array`` variants accept numpy
arrays and are what the quadrature integrands use.
"""

import cmath
import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "cgamma",
    "loggamma",
    "rgamma",
    "gamma_pair",
    "reflection_gamma",
    "pochhammer",
    "sinpi",
    "loggamma_array",
    "rgamma_array",
    "abs_gamma_sq_log",
]

_G = 671.0 / 128.0
_C0 = 0.999999999999997092
_COEF = np.array([
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
POLE_TOL = 1e-14


def _as_complex(w, name="argument"):
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"{name} must be finite, got {w!r}")
    return w


def _near_pole(w):
    """Non-positive integer within POLE_TOL of ``w``, else None."""
    r = round(w.real)
    if r <= 0 and abs(w.real - r) <= POLE_TOL and abs(w.imag) <= POLE_TOL:
        return int(r)
    return None


def _lanczos_log(w):
    # log Gamma(w) for Re w >= 1/2 (array)
    series = np.full(np.shape(w), _C0, dtype=complex)
    for i, c in enumerate(_COEF, start=1):
        series = series + c / (w + i)
    t = w + _G
    return _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(series / w)


def _log_sinpi(w):
    """log sin(pi w), stable for large |Im w| (branch not tracked)."""
    w = np.asarray(w, dtype=complex)
    # reduce the real part to [-1, 1); sin(pi w) changes sign per unit shift
    shift = np.round(w.real)
    red = w - shift
    flip = np.where(np.mod(shift, 2.0) != 0, 1j * math.pi, 0.0)
    y = red.imag
    big = np.abs(y) > 15.0
    out = np.empty(w.shape, dtype=complex)
    small = ~big
    if np.any(small):
        out[small] = np.log(np.sin(math.pi * red[small]))
    if np.any(big):
        r = red[big]
        # for Im r > 0: sin(pi r) = (i/2) e^{-i pi r} (1 - e^{2 i pi r})
        sgn = np.sign(r.imag)
        rr = np.where(sgn > 0, r, np.conj(r))
        val = -1j * math.pi * rr + (math.log(0.5) + 0.5j * math.pi) + np.log1p(-np.exp(2j * math.pi * rr))
        out[big] = np.where(sgn > 0, val, np.conj(val))
    return out + flip


def loggamma_array(w):
    """Elementwise log Gamma for complex arrays (poles give ``inf``).

    The real part is exact in the sense of ``log|Gamma|``; the imaginary part
    is correct modulo ``2 pi``.
    """
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    right = w.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log(w[right])
    left = ~right
    if np.any(left):
        wl = w[left]
        with np.errstate(divide="ignore", invalid="ignore"):
            out[left] = _LOG_PI - _log_sinpi(wl) - _lanczos_log(1.0 - wl)
    return out


def rgamma_array(w):
    """Elementwise ``1/Gamma(w)``; exactly 0 at the poles of Gamma."""
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    right = w.real >= 0.5
    if np.any(right):
        out[right] = np.exp(-_lanczos_log(w[right]))
    left = ~right
    if np.any(left):
        wl = w[left]
        # 1/Gamma(w) = sin(pi w) Gamma(1-w) / pi
        out[left] = sinpi(wl) * np.exp(_lanczos_log(1.0 - wl)) / math.pi
    return out


def sinpi(w):
    """``sin(pi w)`` with exact argument reduction (zero at integers)."""
    w = np.asarray(w, dtype=complex)
    shift = np.round(w.real)
    sign = np.where(np.mod(shift, 2.0) != 0, -1.0, 1.0)
    val = sign * np.sin(math.pi * (w - shift))
    return val.item() if val.ndim == 0 else val


def loggamma(w):
    """log Gamma(w) for complex ``w`` (imaginary part modulo 2 pi)."""
    w = _as_complex(w)
    k = _near_pole(w)
    if k is not None:
        raise PoleError(k)
    return complex(loggamma_array(np.array([w]))[0])


def cgamma(w):
    """Gamma function of a complex argument.

    Parameters
    ----------
    w : complex
        Any finite value except a non-positive integer.

    Returns
    -------
    complex

    Raises
    ------
    PoleError
        If ``w`` lies within 1e-14 of 0, -1, -2, ...
    """
    w = _as_complex(w)
    k = _near_pole(w)
    if k is not None:
        raise PoleError(k)
    if w.real >= 0.5:
        return complex(np.exp(_lanczos_log(np.array([w]))[0]))
    # reflection, evaluated as a product to keep the phase exact
    g1 = complex(np.exp(_lanczos_log(np.array([1.0 - w]))[0]))
    s = complex(sinpi(w))
    if abs(w.imag) < 300.0:
        return math.pi / (s * g1)
    return cmath.exp(loggamma(w))


def rgamma(w):
    """Reciprocal Gamma function; entire, returns 0 at the poles."""
    w = _as_complex(w)
    if _near_pole(w) is not None:
        return 0j
    return complex(rgamma_array(np.array([w]))[0])


def gamma_pair(z, s):
    """``Gamma(z + i s) * Gamma(z - i s)``.

    For real ``z`` this is ``|Gamma(z + i s)|**2`` and the result is returned
    with its imaginary part clamped to exactly zero.
    """
    z = _as_complex(z, "z")
    s = float(s)
    a = z + 1j * s
    b = z - 1j * s
    for w in (a, b):
        k = _near_pole(w)
        if k is not None:
            raise PoleError(k)
    if z.imag == 0.0:
        la = loggamma_array(np.array([a]))[0]
        return complex(math.exp(2.0 * la.real), 0.0)
    lg = loggamma_array(np.array([a, b]))
    if abs(lg[0].real) + abs(lg[1].real) < 600.0:
        return cgamma(a) * cgamma(b)
    return complex(np.exp(lg.sum()))


def abs_gamma_sq_log(a, s):
    """``log |Gamma(a + i s)|**2`` for real ``a`` and an array of ``s``."""
    w = a + 1j * np.asarray(s, dtype=float)
    return 2.0 * loggamma_array(w).real


def reflection_gamma(k, l, z):
    """``1/Gamma(k + l + 2z + 1)`` through Euler's reflection formula.

    Computed as ``-(-1)**(k+l) sin(2 pi z)/pi * Gamma(-2z-k-l)``.  Where
    ``Gamma(-2z-k-l)`` has a pole the reciprocal Gamma is evaluated directly,
    so the function is entire like ``1/Gamma``.
    """
    z = _as_complex(z, "z")
    m = int(k) + int(l)
    w = -2.0 * z - m
    if _near_pole(w) is not None:
        return rgamma(m + 2.0 * z + 1.0)
    sign = -1.0 if m % 2 == 0 else 1.0
    return sign * complex(sinpi(2.0 * z)) / math.pi * cgamma(w)


def pochhammer(p, k):
    """Shifted factorial ``(p)_k = p (p+1) ... (p+k-1)``, ``(p)_0 = 1``."""
    k = int(k)
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    out = 1.0
    for j in range(k):
        out = out * (p + j)
    return out
