"""The renormalized kernel

    Psi_n(x) = 1 + (2/x)^{2z} sum_{k=0}^{n} 4 (k+z) / (k! Gamma(1-k-2z)) K_{2k+2z}(x)

for ``-n-1 < Re z < -n``.  For small ``x`` the leading "1" cancels against
the Bessel sum through order ``x^{2n}``, so three evaluation regimes exist:

* ``direct_bessel`` for ``x >= x_switch``: the formula as written.
* ``small_x_series`` for ``x < x_switch``: the connection formula for ``K``
  turns the sum into ``I_{-2k-2z}`` terms plus a constant that exactly cancels
  the "1"; what is left is a sum of positive powers of ``x``.
* ``extended_precision`` when ``sin(2 pi z)`` is too small for that
  rearrangement (``z`` near a half integer).  At an exact half integer the
  orders are odd integers and the explicit series of ``K_N`` lets the
  cancelling terms be removed in exact rational arithmetic, the rest being
  summed with compensation.  Off the real axis the formula as written is
  summed in multiprecision arithmetic with enough digits to absorb the
  cancellation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath
import numpy as np

from .bessel import bessel_i_array, bessel_k_array
from .errors import DomainError, EnvelopeError, StripMismatchError, strip_index
from .gamma import reflection_gamma, rgamma, sinpi

__all__ = [
    "KernelParams",
    "KernelValue",
    "REGIMES",
    "tail_series",
    "saalschutz_check",
    "saalschutz_scale",
    "psi",
    "psi_array",
    "bessel_i_sum",
    "vanishing_order",
]

REGIMES = ("small_x_series", "direct_bessel", "extended_precision")
_EPS = 2.2e-16


@dataclass(frozen=True)
class KernelParams:
    """Parameters of Psi_n plus the numerical policy used to evaluate it.

    Attributes
    ----------
    z : complex
        Must satisfy ``-n-1 < Re z < -n``.
    n : int
        Strip index, ``0 <= n <= 8``.
    x_switch : float
        Crossover between the small-x rearrangement and the direct formula.
    sin_threshold : float
        Below this value of ``|sin(2 pi z)|`` the rearrangement is abandoned
        for multiprecision direct summation.
    tail_tol : float
        Relative truncation threshold of the tail series.
    """

    z: complex
    n: int
    x_switch: float = 0.5
    sin_threshold: float = 1e-3
    tail_tol: float = 1e-16

    def __post_init__(self):
        z = complex(self.z)
        object.__setattr__(self, "z", z)
        n = int(self.n)
        object.__setattr__(self, "n", n)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("z must be finite")
        if n < 0:
            raise DomainError("n must be a natural number")
        if not (-n - 1 < z.real < -n):
            raise StripMismatchError(z, n, strip_index(z.real))
        if n > 8 or abs(z.imag) > 10:
            raise EnvelopeError("kernel validated only for n <= 8 and |Im z| <= 10")
        if not self.x_switch > 0:
            raise DomainError("x_switch must be positive")
        if not 0 < self.sin_threshold < 0.1:
            raise DomainError("sin_threshold must lie in (0, 0.1)")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")

    @property
    def sin2piz(self):
        return complex(sinpi(2.0 * self.z))

    @property
    def degenerate(self):
        return abs(self.sin2piz) < self.sin_threshold


@dataclass(frozen=True)
class KernelValue:
    psi: complex
    regime: str
    est_error: float


def _coef(z, k):
    # (k+z) / (k! Gamma(1-k-2z))
    return (k + z) * rgamma(1.0 - k - 2.0 * z) / math.factorial(k)


@lru_cache(maxsize=256)
def _tail_coefficients(z, n, lmax):
    """b_l for l = n+1 .. lmax, tail(x) = sum_l b_l (x/2)^{2l}."""
    rg = [rgamma(1.0 - 2.0 * z - k) for k in range(n + 1)]
    out = []
    for l in range(n + 1, lmax + 1):
        inner = 0j
        for k in range(n + 1):
            inner += math.comb(l, k) * (k + z) * rg[k] * reflection_gamma(k, l, z)
        out.append(inner / math.factorial(l) if l < 170 else inner * math.exp(-math.lgamma(l + 1)))
    return tuple(out)


def _tail_array(x, z, n, tail_tol=1e-16, lmax_cap=500):
    x = np.asarray(x, dtype=float)
    q = (0.5 * x) ** 2
    qmax = float(q.max()) if q.size else 0.0
    # grow the coefficient table until the largest-x term is negligible
    lmax = n + 40
    while True:
        b = _tail_coefficients(z, n, lmax)
        tail_mag = abs(b[-1]) * qmax ** lmax if qmax > 0 else 0.0
        head = max(abs(c) * qmax ** (n + 1 + i) for i, c in enumerate(b[:5])) if qmax > 0 else 1.0
        if tail_mag <= tail_tol * head * 1e-3 or lmax >= lmax_cap:
            break
        lmax = min(2 * lmax, lmax_cap)
    s = np.zeros(x.shape, dtype=complex)
    c = np.zeros_like(s)
    qpow = q ** (n + 1)
    for bl in b:
        term = bl * qpow
        t = s + term
        big = np.abs(s) >= np.abs(term)
        c = c + np.where(big, (s - t) + term, (term - t) + s)
        s = t
        qpow = qpow * q
        if np.all(np.abs(term) <= tail_tol * np.abs(s)):
            break
    return s + c


def tail_series(x, z, n, tail_tol=1e-16):
    """Tail of the rearranged I-sum.

    ``sum_{l>=n+1} (x/2)^{2l}/l! sum_{k=0}^{n} C(l,k) (k+z) /
    (Gamma(1-2z-k) Gamma(k+l+2z+1))``, the part of
    ``(2/x)^{2z} sum_k (k+z)/(k! Gamma(1-k-2z)) I_{2k+2z}(x)`` left over after
    the constant ``sin(2 pi z)/(2 pi)``.

    Parameters
    ----------
    x : float
        ``0 < x <= 10``.
    z : complex
    n : int
    """
    x = float(x)
    if not 0 < x <= 10:
        raise DomainError("tail_series needs 0 < x <= 10")
    z = complex(z)
    n = int(n)
    if n < 0 or z.real <= -n - 1:
        raise DomainError("tail_series needs n >= 0 and Re z > -n-1")
    return complex(_tail_array(np.array([x]), z, n, tail_tol)[0])


def bessel_i_sum(x, z, n):
    """``(2/x)^{2z} sum_{k<=n} (k+z)/(k! Gamma(1-k-2z)) I_{2k+2z}(x)``.

    The reference side of the tail reconciliation; it should equal
    ``sin(2 pi z)/(2 pi) + tail_series(x, z, n)``.
    """
    z = complex(z)
    x = float(x)
    total = 0j
    for k in range(int(n) + 1):
        total += _coef(z, k) * complex(bessel_i_array(2 * k + 2 * z, np.array([x]))[0])
    return total * complex(np.exp(2.0 * z * math.log(2.0 / x)))


def _saalschutz_terms(l, z):
    z = complex(z)
    terms = []
    for k in range(l + 1):
        p1 = 1.0 + 0j
        for j in range(l - k):
            p1 *= (-2.0 * z - 2 * l + j)
        p2 = 1.0 + 0j
        for j in range(k):
            p2 *= (2.0 * z + j)
        terms.append(math.comb(l, k) * (k + z) * p1 * p2)
    return terms


def saalschutz_check(l, z):
    """``sum_{k=0}^{l} C(l,k) (k+z) (-2z-2l)_{l-k} (2z)_k``, identically zero."""
    l = int(l)
    if l < 1:
        raise DomainError("saalschutz_check needs l >= 1")
    return complex(math.fsum(t.real for t in _saalschutz_terms(l, z)),
                   math.fsum(t.imag for t in _saalschutz_terms(l, z)))


def saalschutz_scale(l, z):
    """Sum of the moduli of the terms in :func:`saalschutz_check`."""
    return math.fsum(abs(t) for t in _saalschutz_terms(int(l), z))


def vanishing_order(params):
    """Exponent ``p`` with ``|Psi_n(x)| ~ x^p`` (up to logs) as ``x -> 0``."""
    return min(2 * params.n + 2, -4.0 * params.z.real - 2 * params.n)


# ---------------------------------------------------------------------------
# regimes


def _direct(x, p):
    z, n = p.z, p.n
    acc = np.zeros(x.shape, dtype=complex)
    mag = np.zeros(x.shape)
    pw = np.exp(2.0 * z * np.log(2.0 / x))
    for k in range(n + 1):
        term = 4.0 * _coef(z, k) * pw * bessel_k_array(2 * k + 2 * z, x)
        acc += term
        mag += np.abs(term)
    val = 1.0 + acc
    err = 8 * _EPS * (1.0 + mag)
    return val, err


def _small_x(x, p):
    z, n = p.z, p.n
    acc = np.zeros(x.shape, dtype=complex)
    mag = np.zeros(x.shape)
    pw = np.exp(2.0 * z * np.log(2.0 / x))
    for k in range(n + 1):
        term = _coef(z, k) * pw * bessel_i_array(-2 * k - 2 * z, x)
        acc += term
        mag += np.abs(term)
    tail = _tail_array(x, z, n, p.tail_tol)
    f = 2.0 * math.pi / p.sin2piz
    val = f * (acc - tail)
    err = 8 * _EPS * abs(f) * (mag + np.abs(tail))
    return val, err


@lru_cache(maxsize=64)
def _half_integer_polynomial(m):
    """Exact coefficients P_p, p = m+1 .. 2m, of the polynomial part of Psi_m
    at z = -m-1/2 (the lower coefficients cancel identically)."""
    coef = [Fraction(0)] * (2 * m + 1)
    coef[0] += 1
    for k in range(m + 1):
        ck = Fraction(2 * k - 2 * m - 1, 2 * math.factorial(k) * math.factorial(2 * m + 1 - k))
        N = 2 * m + 1 - 2 * k
        for j in range(N):
            coef[k + j] += 2 * ck * (-1) ** j * Fraction(math.factorial(N - j - 1), math.factorial(j))
    if any(c != 0 for c in coef[: m + 1]):
        raise ArithmeticError("polynomial part of the kernel failed to cancel")
    return tuple(float(c) for c in coef[m + 1:])


def _digamma_int(k):
    # psi(k) for a positive integer k
    return -np.euler_gamma + math.fsum(1.0 / i for i in range(1, k))


def _half_integer(x, m):
    """Psi_m(x) at z = -m-1/2 from the explicit series of K of odd order.

    ``K_N`` for odd ``N`` splits into a finite sum of negative powers, a
    logarithmic part and a power series.  Against the leading 1 the finite
    sums cancel exactly, leaving a polynomial (computed in rational
    arithmetic) plus series whose powers of ``x`` all exceed ``2m+1``.
    """
    h = 0.5 * x
    q = h * h
    lg = np.log(h)
    s = np.zeros(x.shape)
    c = np.zeros(x.shape)
    mag = np.zeros(x.shape)

    def add(term):
        nonlocal s, c
        t = s + term
        big = np.abs(s) >= np.abs(term)
        c = c + np.where(big, (s - t) + term, (term - t) + s)
        s = t

    for i, pp in enumerate(_half_integer_polynomial(m)):
        term = pp * q ** (m + 1 + i)
        add(term)
        mag += np.abs(term)
    qmax = float(q.max())
    for k in range(m + 1):
        ck = (k - m - 0.5) / (math.factorial(k) * math.factorial(2 * m + 1 - k))
        N = 2 * m + 1 - 2 * k
        base = 4.0 * ck * q ** (2 * m + 1 - k)
        j = 0
        while True:
            w = 1.0 / (math.factorial(j) * math.factorial(N + j))
            term = base * w * (lg - 0.5 * (_digamma_int(j + 1) + _digamma_int(N + j + 1)))
            add(term)
            mag += np.abs(term)
            if abs(w) * qmax ** j * (abs(math.log(max(qmax, 1e-300))) + 50) < 1e-18 and j > 1:
                break
            base = base * q
            j += 1
            if j > 200:
                break
    return s + c, mag


@lru_cache(maxsize=200000)
def _extended_scalar(x, zr, zi, n):
    digits = min(400, 20 + int(math.ceil((2 * n + 2 - 2 * zr) * abs(math.log10(x)))))
    with mpmath.workdps(digits):
        z = mpmath.mpc(zr, zi) if zi else mpmath.mpf(zr)
        xm = mpmath.mpf(x)
        total = mpmath.mpf(1)
        for k in range(n + 1):
            c = 4 * (k + z) * mpmath.rgamma(1 - k - 2 * z) / mpmath.factorial(k)
            total += (2 / xm) ** (2 * z) * c * mpmath.besselk(2 * k + 2 * z, xm)
        return complex(total)


def _extended(x, p):
    zr, zi = p.z.real, p.z.imag
    m = -zr - 0.5
    if zi == 0.0 and m == int(m) and int(m) == p.n:
        val, mag = _half_integer(x, p.n)
        return val.astype(complex), 8 * _EPS * mag
    val = np.array([_extended_scalar(float(xi), zr, zi, p.n) for xi in x], dtype=complex)
    err = 8 * _EPS * np.abs(val)
    return val, err


_REGIME_FUN = {"direct_bessel": _direct, "small_x_series": _small_x, "extended_precision": _extended}


def _choose(x, p):
    reg = np.where(x >= p.x_switch, 1, 0 if not p.degenerate else 2)
    return reg


def psi_array(x, params, regime=None, with_error=False):
    """Vectorised Psi_n over an array of ``x > 0``.

    Parameters
    ----------
    x : array_like
    params : KernelParams
    regime : str, optional
        Force one of ``REGIMES`` for every point (used for cross-checks).
    with_error : bool
        Also return the per-point error estimate.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("Psi_n needs x > 0")
    flat = x.ravel()
    val = np.empty(flat.shape, dtype=complex)
    err = np.empty(flat.shape)
    if regime is not None:
        if regime not in _REGIME_FUN:
            raise DomainError(f"unknown regime {regime!r}")
        if regime == "small_x_series" and abs(params.sin2piz) == 0.0:
            raise DomainError("small_x_series is undefined when sin(2 pi z) = 0")
        codes = np.full(flat.shape, REGIMES.index(regime))
    else:
        codes = _choose(flat, params)
    for code, name in enumerate(REGIMES):
        m = codes == code
        if np.any(m):
            v, e = _REGIME_FUN[name](flat[m], params)
            val[m] = v
            err[m] = e
    val = val.reshape(x.shape)
    if with_error:
        return val, err.reshape(x.shape), codes.reshape(x.shape)
    return val


def psi(x, params, regime=None):
    """Renormalized kernel Psi_n(x).

    Parameters
    ----------
    x : float
        Positive argument.
    params : KernelParams
    regime : str, optional
        Force an evaluation regime; by default it is chosen from
        ``params.x_switch`` and ``params.sin_threshold``.

    Returns
    -------
    KernelValue

    Examples
    --------
    >>> round(psi(1.0, KernelParams(-0.5, 0)).psi.real, 7)
    0.3980928
    """
    x = float(x)
    if not x > 0:
        raise DomainError("Psi_n needs x > 0")
    v, e, c = psi_array(np.array([x]), params, regime=regime, with_error=True)
    return KernelValue(complex(v[0]), REGIMES[int(c[0])], float(e[0]))
