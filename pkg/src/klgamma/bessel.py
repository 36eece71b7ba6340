"""Modified Bessel functions I and K of complex order.

``K`` is computed from its integral ``K_w(x) = int_0^inf exp(-x cosh t)
cosh(w t) dt``, but not along the real ``t`` axis when the order has a large
imaginary part: there ``K_{i nu}(x)`` is of size ``exp(-pi nu / 2)`` while the
integrand is of size one, and the real-axis integral cancels to nothing.
Instead the contour is moved onto curves of constant phase through the saddle
points of ``-x cosh t + i nu t``, where the integrand is positive or nearly
so.  Small arguments use the ascending series of ``I_{i nu}`` (no cancellation
for imaginary order), large arguments the Hankel expansion.

Every routine works internally with a pair ``(log_scale, mantissa)`` so that
exponentially large or small values can be rescaled without overflow.
"""

import math
import warnings

import mpmath
import numpy as np

from .errors import (
    AccuracyWarning,
    BesselOverflowError,
    ConnectionDegenerateError,
    DomainError,
    EnvelopeError,
)
from .gamma import loggamma_array, rgamma, sinpi
from .quadrature import tanh_sinh_batch

__all__ = [
    "bessel_i",
    "bessel_i_scaled",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_via_connection",
    "bessel_i_array",
    "bessel_k_array",
    "kiv_array",
]

ORDER_ENVELOPE = 200.0
SERIES_MAX_X = 40.0
OVERFLOW_X = 700.0
# integrands are cut where they fall below exp(CUT) times their peak
CUT = -46.0
_RTOL = 3e-15
_CHUNK = 2048


def _check_x(x):
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"Bessel argument must be positive and finite, got {x!r}")
    return x


def _check_order(w, envelope=True):
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("Bessel order must be finite")
    if envelope and abs(w) > ORDER_ENVELOPE:
        raise EnvelopeError(f"|order| = {abs(w):.6g} exceeds the envelope {ORDER_ENVELOPE:g}")
    return w


def _is_int(w):
    return w.imag == 0.0 and float(w.real).is_integer()


# ---------------------------------------------------------------------------
# small helpers, stable for small arguments


def _sinh_minus(d):
    """sinh(d) - d."""
    out = np.sinh(d) - d
    small = np.abs(d) < 0.2
    if np.any(small):
        s = d[small]
        s2 = s * s
        out[small] = s * s2 * (1 / 6 + s2 * (1 / 120 + s2 * (1 / 5040 + s2 * (1 / 362880 + s2 / 39916800))))
    return out


def _dcosh_minus_sinh(d):
    """d cosh(d) - sinh(d)."""
    out = d * np.cosh(d) - np.sinh(d)
    small = np.abs(d) < 0.2
    if np.any(small):
        s = d[small]
        s2 = s * s
        out[small] = s * s2 * (1 / 3 + s2 * (1 / 30 + s2 * (1 / 840 + s2 * (1 / 45360 + s2 / 3991680))))
    return out


def _x_minus_sin(r):
    """r - sin(r)."""
    out = r - np.sin(r)
    small = np.abs(r) < 0.2
    if np.any(small):
        s = r[small]
        s2 = s * s
        out[small] = s * s2 * (1 / 6 - s2 * (1 / 120 - s2 * (1 / 5040 - s2 * (1 / 362880 - s2 / 39916800))))
    return out


def _bisect(fun, lo, hi, iters=60):
    """Vectorised bisection for a sign change of ``fun`` (``fun(lo) > 0 >= fun(hi)``)."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pos = fun(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return hi


def _grow(fun, start):
    """Smallest ``start * 2**j`` at which ``fun`` is <= 0 (``fun`` decreasing)."""
    hi = start.copy()
    for _ in range(80):
        bad = fun(hi) > 0
        if not np.any(bad):
            break
        hi = np.where(bad, 2.0 * hi, hi)
    return hi


# ---------------------------------------------------------------------------
# I_nu


def _neumaier(s, c, term):
    t = s + term
    big = np.abs(s) >= np.abs(term)
    c = c + np.where(big, (s - t) + term, (term - t) + s)
    return t, c


def _i_series_sum(nu, x):
    """sum_k (x/2)^{2k} / (k! Gamma(nu+k+1)), compensated."""
    q = 0.25 * x * x
    term = np.full(x.shape, rgamma(nu + 1.0), dtype=complex)
    s = term.copy()
    c = np.zeros_like(s)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        s, c = _neumaier(s, c, term)
        tot = np.abs(s + c)
        decreasing = np.all(q / (k * abs(nu + k)) < 0.5)
        if decreasing and np.all(np.abs(term) <= 1e-17 * tot):
            break
        if k > 2000:
            break
    return s + c


def _hankel_terms(nu, x, sign):
    """sum_k sign^k a_k(nu) / x^k, optimally truncated; also the last term."""
    mu = 4.0 * nu * nu
    term = np.ones(x.shape, dtype=complex)
    s = term.copy()
    c = np.zeros_like(s)
    last = np.abs(term)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        nxt = term * sign * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        grows = np.abs(nxt) > last
        active &= ~grows
        if not np.any(active):
            break
        term = np.where(active, nxt, 0.0)
        s, c = _neumaier(s, c, term)
        last = np.where(active, np.abs(term), last)
        active &= last > 1e-17 * np.abs(s)
        if not np.any(active):
            break
    return s + c, last


def _i_parts(nu, x, x_scaled=False):
    """(log_scale, mantissa) with I_nu(x) = exp(log_scale) * mantissa.

    With ``x_scaled`` the factor ``exp(-x)`` is folded in; on the asymptotic
    branch it is never formed, so large ``x`` loses no digits.
    """
    if _is_int(nu) and nu.real < 0:
        nu = -nu
    ls = np.zeros(x.shape)
    mant = np.zeros(x.shape, dtype=complex)
    big = x > SERIES_MAX_X
    use_series = ~big
    if np.any(big):
        xb = x[big]
        h, last = _hankel_terms(nu, xb, -1.0)
        ok = last <= 1e-15 * np.abs(h)
        ls_b = (0.0 if x_scaled else xb) - 0.5 * np.log(2.0 * math.pi * xb)
        ls[big] = ls_b
        mant[big] = h
        # asymptotic series not converged: fall back to the series
        if not np.all(ok):
            idx = np.nonzero(big)[0][~ok]
            use_series[idx] = True
    if np.any(use_series):
        xs = x[use_series]
        ser = _i_series_sum(nu, xs)
        # (x/2)^nu = exp(nu log(x/2)); keep the real part of the exponent in ls
        lz = nu * np.log(0.5 * xs)
        ls[use_series] = lz.real - (xs if x_scaled else 0.0)
        mant[use_series] = ser * np.exp(1j * lz.imag)
    return ls, mant


def bessel_i_array(nu, x, scaled=False):
    """``I_nu(x)`` for a fixed complex order and an array of ``x > 0``.

    With ``scaled=True`` returns ``exp(-x) I_nu(x)``.
    """
    nu = complex(nu)
    x = np.asarray(x, dtype=float)
    ls, mant = _i_parts(nu, x.ravel(), scaled)
    with np.errstate(over="ignore", under="ignore"):
        out = np.exp(ls) * mant
    return out.reshape(x.shape)


def bessel_i(nu, x):
    """Modified Bessel function of the first kind, complex order.

    Parameters
    ----------
    nu : complex
        Order.  Negative integer orders use ``I_{-m} = I_m``.
    x : float
        Positive argument.

    Returns
    -------
    complex

    Notes
    -----
    For ``x <= 40`` the ascending series is summed with compensated
    addition; beyond that the large-argument expansion is used, truncated at
    its smallest term.
    """
    x = _check_x(x)
    nu = _check_order(nu, envelope=False)
    if x > OVERFLOW_X:
        raise BesselOverflowError(f"I_nu({x:g}) overflows; use bessel_i_scaled")
    return complex(bessel_i_array(nu, np.array([x]))[0])


def bessel_i_scaled(nu, x):
    """``exp(-x) I_nu(x)``."""
    x = _check_x(x)
    nu = _check_order(nu, envelope=False)
    return complex(bessel_i_array(nu, np.array([x]), scaled=True)[0])


# ---------------------------------------------------------------------------
# K_{i nu}, imaginary order, vectorised over (nu, x)


def _kiv_hankel(nu, x):
    # log scale without the -x, added by the caller unless scaled
    h, _ = _hankel_terms(1j * nu, x, 1.0)
    return 0.5 * np.log(math.pi / (2.0 * x)), h.real


def _kiv_series(nu, x):
    # K_{i nu} = -pi Im I_{i nu} / sinh(pi nu); I from its ascending series
    q = 0.25 * x * x
    term = np.ones(nu.shape, dtype=complex)
    s = term.copy()
    c = np.zeros_like(s)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + 1j * nu))
        s, c = _neumaier(s, c, term)
        if np.all(np.abs(term) <= 1e-17 * np.abs(s)) and k > 1:
            break
    a = s + c
    lg = loggamma_array(1.0 + 1j * nu)
    theta = nu * np.log(0.5 * x) - lg.imag
    im = np.sin(theta) * a.real + np.cos(theta) * a.imag
    ls = -lg.real - math.pi * nu + math.log(2.0 * math.pi) - np.log(-np.expm1(-2.0 * math.pi * nu))
    return ls, -im


def _kiv_real_axis(nu, x):
    # int_0^inf exp(-x (cosh t - 1)) cos(nu t) dt, two panels around the drop
    a = np.maximum(0.0, np.log(2.0 / x) - 3.0)
    b = np.arccosh(1.0 - CUT / x)
    b = np.maximum(b, a + 1.0)
    nu_c = nu[:, None]
    x_c = x[:, None]

    def g(t):
        return np.exp(-2.0 * x_c * np.sinh(0.5 * t) ** 2) * np.cos(nu_c * t)

    v1, _ = tanh_sinh_batch(g, np.zeros_like(a), a, rtol=_RTOL, max_level=11)
    v1 = np.where(a > 0, v1, 0.0)
    v2, _ = tanh_sinh_batch(g, a, b, rtol=_RTOL, max_level=11)
    return -x, v1 + v2


def _kiv_arcsin(nu, x):
    # constant-phase path t = tau + i sigma(tau), sin sigma = nu tau / (x sinh tau)
    rho0 = np.arccos(nu / x)
    phi0 = -x * np.sin(rho0) - nu * (0.5 * math.pi - rho0)
    nu_c, x_c, phi0_c = nu[:, None], x[:, None], phi0[:, None]

    def expo(t, nu_, x_, phi0_):
        sh = np.sinh(t)
        one_m_r = (x_ * _sinh_minus(t) + (x_ - nu_) * t) / (x_ * sh)
        one_m_r = np.clip(one_m_r, 0.0, 1.0)
        rho = 2.0 * np.arcsin(np.sqrt(0.5 * one_m_r))
        sin_rho = np.sqrt(one_m_r * (2.0 - one_m_r))
        return -x_ * np.cosh(t) * sin_rho - nu_ * (0.5 * math.pi - rho) - phi0_

    with np.errstate(over="ignore", invalid="ignore"):
        hi = _grow(lambda t: expo(t, nu, x, phi0) - CUT, np.full(nu.shape, 1.0))
        T = _bisect(lambda t: expo(t, nu, x, phi0) - CUT, np.full(nu.shape, 1e-300), hi, iters=50)

        def g(t):
            return np.exp(expo(t, nu_c, x_c, phi0_c))

        val, _ = tanh_sinh_batch(g, np.zeros_like(T), T, rtol=_RTOL, max_level=10)
    return phi0, val


class _Saddle:
    """Geometry of the saddle tau0 + i pi/2 of -x cosh t + i nu t (nu > x)."""

    def __init__(self, nu, x):
        self.nu = nu
        self.x = x
        q1 = (nu - x) / x
        self.S = np.sqrt((nu - x) * (nu + x))
        self.tau0 = np.log1p(q1 + np.sqrt(q1 * (q1 + 2.0)))
        self.chi = x * _dcosh_minus_sinh(self.tau0)

    def arm(self, d):
        """Exponent E (relative to the saddle) and d sigma / d tau at offset d."""
        nu, S = self.nu, self.S
        if np.ndim(d) == 2 and np.ndim(nu) == 1:
            nu = nu[:, None]
            S = S[:, None]
        sh = np.sinh(d)
        ch_m1 = 2.0 * np.sinh(0.5 * d) ** 2
        xsinh = S * (1.0 + ch_m1) + nu * sh
        one_m_r = (S * ch_m1 + nu * _sinh_minus(d)) / xsinh
        one_m_r = np.clip(one_m_r, 0.0, 2.0)
        rho = 2.0 * np.arcsin(np.sqrt(np.minimum(0.5 * one_m_r, 1.0)))
        sin_rho = np.sqrt(one_m_r * (2.0 - one_m_r))
        core = nu * _x_minus_sin(rho) - (nu * ch_m1 + S * sh) * sin_rho
        E = np.where(d >= 0, core, -core)
        xN = nu * nu * _dcosh_minus_sinh(d) + S * S * sh + S * nu * d * sh
        with np.errstate(invalid="ignore", divide="ignore"):
            dsig = -np.abs(xN) / (xsinh * xsinh * sin_rho)
        dsig = np.where(np.isfinite(dsig), dsig, -1.0)
        return E, dsig


def _kiv_saddle(nu, x):
    sd = _Saddle(nu, x)
    tau0, chi, S = sd.tau0, sd.chi, sd.S
    ls = -0.5 * math.pi * nu

    # right arm, d in (0, D]
    def e_right(d):
        return sd.arm(d)[0] - CUT

    start = np.minimum(1.0, 1.0 / np.sqrt(S))
    hi = _grow(e_right, start)
    D = _bisect(e_right, np.zeros_like(hi), hi, iters=50)

    # left part: the up arm when it falls deep enough before sigma = pi,
    # otherwise the horizontal segment Im t = pi/2 from 0 to tau0
    d_pi = -S / nu
    tau_pi = tau0 + d_pi
    e_pi = x * np.cosh(tau_pi) - 0.5 * math.pi * nu
    up = e_pi < CUT - 2.0

    lo = np.zeros_like(D)
    if np.any(up):
        sub = _Saddle(nu[up], x[up])
        # CUT - E changes sign between d_pi (deep) and 0 (the saddle)
        lo[up] = _bisect(lambda d: CUT - sub.arm(d)[0], d_pi[up], np.zeros(int(up.sum())), iters=55)

    def g1(d):
        E, _ = sd.arm(d)
        return np.exp(E)

    def g2(d):
        E, s = sd.arm(d)
        return np.exp(E) * s

    j1, _ = tanh_sinh_batch(g1, lo, D, rtol=_RTOL, max_level=10)
    j2, _ = tanh_sinh_batch(g2, lo, D, rtol=_RTOL, max_level=10)
    mant = np.cos(chi) * j1 - np.sin(chi) * j2

    flat = ~up
    if np.any(flat):
        nu_f = nu[flat][:, None]
        x_f = x[flat][:, None]

        def gh(t):
            return np.cos(nu_f * t - x_f * np.sinh(t))

        h, _ = tanh_sinh_batch(gh, np.zeros(int(flat.sum())), tau0[flat], rtol=_RTOL, max_level=12)
        mant[flat] += h
    return ls, mant


def _kiv_parts(nu, x, x_scaled=False):
    nu = np.abs(np.asarray(nu, dtype=float))
    x = np.asarray(x, dtype=float)
    nu, x = np.broadcast_arrays(nu, x)
    shape = nu.shape
    nu = nu.ravel().copy()
    x = x.ravel().copy()
    ls = np.empty(nu.shape)
    mant = np.empty(nu.shape)
    hank = (x >= SERIES_MAX_X) & (x >= 0.5 * nu * nu)
    small = ~hank & (x <= 2.0)
    ser = small & (nu >= 0.1)
    axis = small & (nu < 0.1)
    rest = ~hank & ~small
    arc = rest & (nu <= x)
    sad = rest & (nu > x)
    for mask, fn in ((hank, _kiv_hankel), (ser, _kiv_series), (axis, _kiv_real_axis),
                     (arc, _kiv_arcsin), (sad, _kiv_saddle)):
        if np.any(mask):
            a, b = fn(nu[mask], x[mask])
            if fn is _kiv_hankel:
                ls[mask] = a if x_scaled else a - x[mask]
            else:
                ls[mask] = a + x[mask] if x_scaled else a
            mant[mask] = b
    return ls.reshape(shape), mant.reshape(shape)


def kiv_array(nu, x, scale=None):
    """``K_{i nu}(x)`` for real ``nu`` and ``x > 0`` (broadcast arrays).

    Parameters
    ----------
    nu, x : array_like
    scale : {None, "x", "nu"}
        ``"x"`` returns ``exp(x) K``, ``"nu"`` returns ``exp(pi |nu| / 2) K``.

    Returns
    -------
    ndarray of float
    """
    nu_a = np.abs(np.asarray(nu, dtype=float))
    x_a = np.asarray(x, dtype=float)
    if scale not in (None, "x", "nu"):
        raise DomainError(f"unknown scale {scale!r}")
    nu_a, x_a = np.broadcast_arrays(nu_a, x_a)
    shape = nu_a.shape
    nu_f = nu_a.ravel()
    x_f = x_a.ravel()
    ls = np.empty(nu_f.shape)
    mant = np.empty(nu_f.shape)
    # chunks bound the memory of the batched quadratures
    for i in range(0, nu_f.size, _CHUNK):
        sl = slice(i, i + _CHUNK)
        ls[sl], mant[sl] = _kiv_parts(nu_f[sl], x_f[sl], scale == "x")
    ls = ls.reshape(shape)
    mant = mant.reshape(shape)
    nu_a = nu_f.reshape(shape)
    if scale == "nu":
        ls = ls + 0.5 * math.pi * nu_a
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(ls) * mant


# ---------------------------------------------------------------------------
# K_w, general complex order, vectorised over x


def _kw_tilted(w, x):
    # full line (1/2) int exp(-x cosh t + w t), shifted to Im t = theta, with
    # theta following the saddle asinh(w/x) but kept off the lines +-pi/2
    alpha, beta = w.real, w.imag
    cap = max(0.0, 0.5 * math.pi - 3.0 / abs(beta)) if beta != 0.0 else 0.0
    theta = np.clip(np.arcsinh(w / x).imag, -cap, cap)
    ct = np.cos(theta)
    tstar = np.arcsinh(alpha / (x * ct))

    def drop(t):
        return -x * np.cosh(t) * ct + alpha * t - mstar - CUT

    mstar = -x * np.cosh(tstar) * ct + alpha * tstar
    with np.errstate(over="ignore"):
        hi = tstar + _grow(lambda d: drop(tstar + d), np.ones_like(x))
        hi = _bisect(drop, tstar, hi, iters=55)
        lo = tstar - _grow(lambda d: drop(tstar - d), np.ones_like(x))
        lo = _bisect(drop, tstar, lo, iters=55)
    x_c = x[:, None]
    ms_c = mstar[:, None]
    th_c = theta[:, None]

    def g(t):
        tc = t + 1j * th_c
        return np.exp(-x_c * np.cosh(tc) + w * tc - ms_c)

    val, _ = tanh_sinh_batch(g, lo, hi, rtol=_RTOL, max_level=10)
    return mstar, 0.5 * val


def _kw_parts(w, x, x_scaled=False):
    """(log_scale, complex mantissa) for K_w(x), fixed order, array x."""
    w = complex(w)
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        w = -w
    x = np.asarray(x, dtype=float).ravel()
    if w.real == 0.0:
        ls, mant = _kiv_parts(np.full(x.shape, w.imag), x, x_scaled)
        return ls, mant.astype(complex)
    ls = np.empty(x.shape)
    mant = np.empty(x.shape, dtype=complex)
    hank = (x >= SERIES_MAX_X) & (x >= 0.5 * abs(w) ** 2)
    if np.any(hank):
        h, _ = _hankel_terms(w, x[hank], 1.0)
        ls[hank] = (0.0 if x_scaled else -x[hank]) + 0.5 * np.log(math.pi / (2.0 * x[hank]))
        mant[hank] = h
    rest = ~hank
    if np.any(rest):
        a, b = _kw_tilted(w, x[rest])
        ls[rest] = a + x[rest] if x_scaled else a
        mant[rest] = b
    return ls, mant


def bessel_k_array(w, x, scaled=False):
    """``K_w(x)`` for a fixed complex order over an array of ``x > 0``.

    With ``scaled=True`` returns ``exp(x) K_w(x)``.  Values that underflow
    are returned as 0; overflow gives ``inf``.
    """
    x = np.asarray(x, dtype=float)
    ls, mant = _kw_parts(w, x, scaled)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        out = np.exp(ls) * mant
    out = np.where(mant == 0, 0.0, out)
    return out.reshape(x.shape)


def _k_scalar(w, x, scaled):
    x = _check_x(x)
    w = _check_order(w)
    if x < 1e-6 and w.real != 0.0:
        warnings.warn(f"K_w at x={x:g} with Re w != 0 is near-singular; accuracy not guaranteed",
                      AccuracyWarning, stacklevel=3)
    ls, mant = _kw_parts(w, np.array([x]), scaled)
    ls = float(ls[0])
    if ls > 709.0:
        raise BesselOverflowError(f"K_w({x:g}) overflows a double")
    val = complex(mant[0]) * math.exp(ls) if ls > -745.0 else 0j
    if w.imag == 0.0 or w.real == 0.0:
        val = complex(val.real, 0.0)
    return val


def bessel_k(w, x):
    """Modified Bessel function of the second kind, complex order.

    ``K_w(x) = int_0^inf exp(-x cosh t) cosh(w t) dt``.

    Parameters
    ----------
    w : complex
        Order, ``|w| <= 200``.  Real, integer, complex and purely imaginary
        orders are all handled by the same integral.
    x : float
        Positive argument.

    Returns
    -------
    complex
        Real orders and purely imaginary orders give an exactly real value.

    Raises
    ------
    DomainError
        If ``x <= 0``.
    EnvelopeError
        If ``|w| > 200``.
    """
    return _k_scalar(w, x, scaled=False)


def bessel_k_scaled(w, x):
    """``exp(x) K_w(x)``."""
    return _k_scalar(w, x, scaled=True)


def bessel_k_via_connection(nu, x, min_sin=1e-3):
    """``K_nu(x) = pi/(2 sin(pi nu)) (I_{-nu}(x) - I_nu(x))``.

    An independent cross-check of :func:`bessel_k`; it cancels badly near
    integer orders and refuses them.  For ``x > 1`` the two ``I`` values
    agree to about ``exp(-2x)`` relative, so the difference of the series is
    summed in multiprecision with enough guard digits to absorb that.

    Raises
    ------
    ConnectionDegenerateError
        If ``|sin(pi nu)| < min_sin``.
    """
    x = _check_x(x)
    nu = _check_order(nu)
    s = complex(sinpi(nu))
    if abs(s) < min_sin:
        raise ConnectionDegenerateError(
            f"|sin(pi nu)| = {abs(s):.3g} < {min_sin:g}; use bessel_k for near-integer orders")
    if x <= 1.0:
        return math.pi / (2.0 * s) * (bessel_i(-nu, x) - bessel_i(nu, x))
    return math.pi / (2.0 * s) * _connection_difference(nu, x)


def _connection_difference(nu, x):
    """``I_{-nu}(x) - I_nu(x)`` from the power series at raised precision."""
    digits = 20 + int(2.0 * x / math.log(10.0)) + int(max(0.0, -math.log10(max(abs(complex(sinpi(nu))), 1e-300))))
    with mpmath.workdps(digits):
        h = mpmath.mpf(x) / 2
        w = mpmath.mpc(nu.real, nu.imag)
        a = h ** (-w) * mpmath.rgamma(1 - w)
        b = h ** w * mpmath.rgamma(1 + w)
        h2 = h * h
        total = a - b
        k = 0
        while True:
            k += 1
            a *= h2 / (k * (k - w))
            b *= h2 / (k * (k + w))
            total += a - b
            if k > x and abs(a) + abs(b) < mpmath.mpf(10) ** (-digits) * abs(total):
                break
        return complex(total)
